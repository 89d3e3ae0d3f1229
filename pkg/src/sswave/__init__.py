"""Self-similar blowup toolkit for the radial semilinear wave equation.

Subpackages
-----------
model      equation, attractor profile, potential, similarity coordinates
frobenius  power-series solutions at the regular singular points
contfrac   spectrum via order reduction and Pincherle continued fractions
shooting   independent spectrum cross-check (Wronskian of two branches)
modes      eigenmode profiles w_k(rho) = v_k(rho)/rho on grids
evolve     nonlinear radial PDE solver with blowup detection
analysis   similarity-variable rescaling and eigenmode-decay fits
cli        command-line pipeline with CSV/JSON outputs
"""

__version__ = "0.1.0"
