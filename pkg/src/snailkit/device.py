"""Device sheets: one flat TOML file holding everything known about a device.

Every numeric key embeds its unit in the name (``l_j_ph`` is picohenries,
``omega_r0_ghz`` cyclic gigahertz, ...), so a sheet is self-describing and
there is exactly one place -- this module's key table -- where those tags are
turned into internal SI/angular values.  Unknown keys are rejected rather
than ignored: a typo in a parameter name must not silently drop a parameter.

An optional ``[provenance]`` table maps field names to free-text strings
(where the number came from: which fit, which figure of a lab notebook, ...).

Only ``name``, ``beta``, ``l_j_ph``, ``omega_r0_ghz`` and ``z_c_ohm`` are
mandatory; the qubit, TLS, loss-budget, and summary-table entries are
optional and the typed accessors below raise SchemaError when asked for a
group whose fields are absent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

try:  # python >= 3.11
    import tomllib as _toml
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as _toml

from .circuit import SnailConfig
from .dispersive import QubitParams
from .dynamics import TlsParams
from .errors import IoError, SchemaError
from .modes import ResonatorGeometry

TWO_PI = 2.0 * math.pi

# key -> (unit tag, factor to internal units, description)
# Internal units: angular rad/s for frequencies/linewidths, seconds, henries,
# kelvin, dimensionless.  The loss_* rates are deliberately kept in cyclic Hz
# because that is the convention of the additive loss budget.
KEY_TABLE: dict[str, tuple[str, float, str]] = {
    "beta": ("dimensionless", 1.0, "junction asymmetry ratio"),
    "l_j_ph": ("pH", 1e-12, "array inductance"),
    "omega_r0_ghz": ("GHz", TWO_PI * 1e9, "bare line half-wave frequency"),
    "z_c_ohm": ("ohm", 1.0, "line characteristic impedance"),
    "op_flux_phi0": ("Phi0", 1.0, "operating external flux"),
    "omega_q0_ghz": ("GHz", TWO_PI * 1e9, "bare qubit frequency"),
    "alpha_q_mhz": ("MHz", TWO_PI * 1e6, "qubit anharmonicity"),
    "g0_mhz": ("MHz", TWO_PI * 1e6, "qubit-resonator coupling"),
    "gamma_q_khz": ("kHz", TWO_PI * 1e3, "qubit spectroscopic linewidth (FWHM)"),
    "chi0_mhz": ("MHz", TWO_PI * 1e6, "dispersive shift"),
    "chi_prime_khz": ("kHz", TWO_PI * 1e3, "dispersive shift drift per photon"),
    "f_delta_tls": ("dimensionless", 1.0, "TLS filling-factor loss product"),
    "n_c": ("dimensionless", 1.0, "TLS critical photon number"),
    "delta_other": ("dimensionless", 1.0, "non-TLS loss tangent"),
    "t_res_mk": ("mK", 1e-3, "resonator bath temperature"),
    "t1_qubit_us": ("us", 1e-6, "qubit energy relaxation time"),
    "loss_gamma_q_hz": ("Hz", 1.0, "qubit-inherited loss rate (budget)"),
    "loss_gamma_c_hz": ("Hz", 1.0, "coupling loss rate (budget)"),
    "loss_gamma_f_hz": ("Hz", 1.0, "flux-line loss rate (budget)"),
    "freq_zero_ghz": ("GHz", TWO_PI * 1e9, "measured mode frequency at zero flux"),
    "freq_op_ghz": ("GHz", TWO_PI * 1e9, "measured mode frequency at the operating flux"),
    "q_s_zero": ("dimensionless", 1.0, "linewidth quality factor at zero flux"),
    "q_s_op": ("dimensionless", 1.0, "linewidth quality factor at the operating flux"),
    "t_s_zero_us": ("us", 1e-6, "coherence time at zero flux"),
    "t_s_op_us": ("us", 1e-6, "coherence time at the operating flux"),
    "t1_zero_us": ("us", 1e-6, "low-power energy relaxation time at zero flux"),
    "t1_op_us": ("us", 1e-6, "energy relaxation time at the operating flux"),
    "k_cal": ("1/drive", 1.0, "drive-amplitude-to-alpha calibration slope"),
    "n_bar_residual": ("dimensionless", 1.0, "zero-drive thermal occupation"),
}

_REQUIRED = ("beta", "l_j_ph", "omega_r0_ghz", "z_c_ohm")


@dataclass(frozen=True)
class DeviceSheet:
    """Validated device record: raw file values plus typed accessors."""

    name: str
    values: dict[str, float]
    provenance: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        unknown = sorted(set(self.values) - set(KEY_TABLE))
        if unknown:
            raise SchemaError(
                f"unknown device-sheet keys: {', '.join(unknown)}", fields=tuple(unknown)
            )
        missing = tuple(k for k in _REQUIRED if k not in self.values)
        if missing:
            raise SchemaError(
                f"device sheet is missing required keys: {', '.join(missing)}",
                fields=missing,
            )
        bad_prov = sorted(set(self.provenance) - set(KEY_TABLE))
        if bad_prov:
            raise SchemaError(
                f"provenance refers to unknown keys: {', '.join(bad_prov)}",
                fields=tuple(bad_prov),
            )

    def has(self, key: str) -> bool:
        return key in self.values

    def raw(self, key: str) -> float:
        """File-units value of a key (as written in the sheet)."""
        try:
            return self.values[key]
        except KeyError:
            raise SchemaError(f"device sheet has no key {key!r}", fields=(key,)) from None

    def si(self, key: str) -> float:
        """Internal-units value (angular rad/s, seconds, henries, kelvin)."""
        return self.raw(key) * KEY_TABLE[key][1]

    def unit(self, key: str) -> str:
        return KEY_TABLE[key][0]

    # -- typed parameter groups ------------------------------------------

    def snail_config(self, flux_phi0: float | None = None) -> SnailConfig:
        """SNAIL knob set at the given flux (default: the sheet's op point, else 0)."""
        if flux_phi0 is None:
            flux_phi0 = self.values.get("op_flux_phi0", 0.0)
        return SnailConfig(
            beta=self.si("beta"),
            l_j=self.si("l_j_ph"),
            phi_ext=TWO_PI * flux_phi0,
        )

    def geometry(self) -> ResonatorGeometry:
        return ResonatorGeometry(omega_r0=self.si("omega_r0_ghz"), z_c=self.si("z_c_ohm"))

    def qubit(self) -> QubitParams:
        need = ("omega_q0_ghz", "alpha_q_mhz", "g0_mhz", "gamma_q_khz")
        missing = tuple(k for k in need if k not in self.values)
        if missing:
            raise SchemaError(
                f"device sheet has no qubit block (missing {', '.join(missing)})",
                fields=missing,
            )
        return QubitParams(
            omega_q0=self.si("omega_q0_ghz"),
            alpha_q=self.si("alpha_q_mhz"),
            g0=self.si("g0_mhz"),
            gamma_q=self.si("gamma_q_khz"),
        )

    def tls_params(self) -> TlsParams:
        need = ("f_delta_tls", "n_c", "delta_other", "t_res_mk")
        missing = tuple(k for k in need if k not in self.values)
        if missing:
            raise SchemaError(
                f"device sheet has no TLS block (missing {', '.join(missing)})",
                fields=missing,
            )
        return TlsParams(
            f_delta_tls=self.si("f_delta_tls"),
            n_c=self.si("n_c"),
            delta_other=self.si("delta_other"),
            t_res=self.si("t_res_mk"),
        )


def load_device_sheet(path: str) -> DeviceSheet:
    """Parse and validate a device sheet TOML file.

    Raises
    ------
    IoError : unreadable file.
    SchemaError : syntax errors, wrong value types, unknown keys, or a
        missing required key.
    """
    try:
        with open(path, "rb") as fh:
            raw = _toml.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except _toml.TOMLDecodeError as exc:
        raise SchemaError(f"{path}: not valid TOML: {exc}") from exc

    name = raw.pop("name", None)
    if not isinstance(name, str) or not name:
        raise SchemaError(f"{path}: device sheet needs a non-empty string 'name'")
    prov_raw = raw.pop("provenance", {})
    if not isinstance(prov_raw, dict) or not all(
        isinstance(v, str) for v in prov_raw.values()
    ):
        raise SchemaError(f"{path}: [provenance] must map field names to strings")
    values: dict[str, float] = {}
    bad_type = []
    for key, val in raw.items():
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            bad_type.append(key)
        else:
            values[key] = float(val)
    if bad_type:
        raise SchemaError(
            f"{path}: non-numeric values for keys: {', '.join(sorted(bad_type))}",
            fields=tuple(sorted(bad_type)),
        )
    return DeviceSheet(name=name, values=values, provenance=dict(prov_raw))
