import math

from dampedbouncer.common.errors import ConfigError


class PhysicalSystem:
    """Mass, gravity and reduced Planck constant of the bouncer, with the derived gravitational scales.

    l_g = (hbar^2 / (2 m^2 g))^(1/3) is the length unit, e_g = m g l_g the energy unit.
    All spectral quantities are computed in these units and converted on output.
    """
    __slots__ = ['_m', '_g', '_hbar', '_l_g']

    def __init__(self, m: float, g: float, hbar: float) -> None:
        for name, value in (("m", m), ("g", g), ("hbar", hbar)):
            if not math.isfinite(value) or value <= 0:
                raise ConfigError(f"Physical parameter `{name}` must be finite and strictly positive, got {value}.")

        self._m: float = float(m)
        self._g: float = float(g)
        self._hbar: float = float(hbar)
        self._l_g: float = (self._hbar ** 2 / (2 * self._m ** 2 * self._g)) ** (1 / 3)

    @classmethod
    def normalized(cls) -> 'PhysicalSystem':
        return cls(1.0, 1.0, math.sqrt(2.0))

    @property
    def m(self) -> float:
        return self._m

    @property
    def g(self) -> float:
        return self._g

    @property
    def hbar(self) -> float:
        return self._hbar

    @property
    def l_g(self) -> float:
        return self._l_g

    @property
    def e_g(self) -> float:
        return self._m * self._g * self._l_g

    @property
    def t_g(self) -> float:
        return math.sqrt(self._l_g / self._g)

    def to_energy(self, value: float) -> float:
        return value * self.e_g

    def to_dimensionless_energy(self, energy: float) -> float:
        return energy / self.e_g

    def linear_epsilon(self, alpha: float) -> float:
        """Dimensionless strength of the linear drag: (alpha/m) sqrt(l_g/g)."""
        return alpha / self._m * self.t_g

    def quadratic_epsilon(self, gamma: float) -> float:
        """Dimensionless strength of the quadratic drag: gamma l_g / m."""
        return gamma * self._l_g / self._m

    def as_dict(self) -> dict:
        return {"m": self._m, "g": self._g, "hbar": self._hbar, "l_g": self._l_g, "e_g": self.e_g}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhysicalSystem):
            return NotImplemented
        return (self._m, self._g, self._hbar) == (other._m, other._g, other._hbar)

    def __hash__(self) -> int:
        return hash((self._m, self._g, self._hbar))

    def __repr__(self) -> str:
        return f"PhysicalSystem(m={self._m!r}, g={self._g!r}, hbar={self._hbar!r})"


def get_system_instance(system_name: str) -> PhysicalSystem:
    if system_name not in system_presets:
        raise ConfigError(f"System preset `{system_name}` not supported!")

    preset = system_presets[system_name]

    return PhysicalSystem(m=preset['m'], g=preset['g'], hbar=preset['hbar'])


system_presets = {
    # m = g = l_g = 1
    'normalized': {
        'm': 1.0,
        'g': 1.0,
        'hbar': math.sqrt(2.0),
    },
    # SI units
    'neutron': {
        'm': 1.67492749804e-27,
        'g': 9.80665,
        'hbar': 1.054571817e-34,
    },
    'electron': {
        'm': 9.1093837015e-31,
        'g': 9.80665,
        'hbar': 1.054571817e-34,
    },
}
