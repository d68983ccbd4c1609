from . import euclidean, halfplane  # noqa: F401  (registers the models)
