"""Exception taxonomy shared across the package.

The command line layer maps these onto process exit codes, so raising the
right class matters more than the message wording:

* ``ConfigError``     -> exit code 2 (bad input, bad schema, invalid model)
* ``HypothesisError`` -> exit code 3 (model or body violates a stated
  assumption of the limit theory, e.g. tail index at or below 1)
* ``EstimationError`` -> exit code 4 (a run produced nothing estimable,
  e.g. all particles extinct)
"""


class ConfigError(ValueError):
    """Invalid configuration, model parameter, or geometric domain."""


class HypothesisError(ValueError):
    """A named assumption required by the asymptotic theory fails."""


class EstimationError(RuntimeError):
    """An estimator could not produce a usable value (extinction etc.)."""
