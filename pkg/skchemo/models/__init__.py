from .poisson import laplace, vector_laplace, mass  # noqa
