"""Hardy-Henon parabolic equation u_t - Delta_H u = |.|^gamma u^p on the
Heisenberg group H^1, at desk scale: explicit heat-kernel quadrature, discrete
group convolution, mild-solution time integration, monotone global
constructions, and the Fujita-dichotomy diagnostics."""

from .convolve import backend

__version__ = "0.1.0"
__all__ = ["backend", "__version__"]
