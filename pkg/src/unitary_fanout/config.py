"""File formats: target vectors, settings JSON, technology profiles, digital coefficients."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import MalformedSettings, ParseError
from .power import DEFAULT_DIGITAL, DEFAULT_PROFILES, DigitalCoeffs, TechProfile
from .synthesis import TreeSettings, tree_depth

PROFILES_ENV = "UNITARY_FANOUT_PROFILES"


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file in the same directory and a rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_pair(text: str, where: str) -> complex:
    parts = [t.strip() for t in text.split(",")]
    if len(parts) == 1:
        parts.append("0")
    if len(parts) != 2:
        raise ParseError(f"{where}: expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise ParseError(f"{where}: cannot parse {text!r} as 're,im'") from None


def parse_target_inline(text: str) -> np.ndarray:
    """Parse ``"re,im;re,im;..."``."""
    items = [t for t in text.strip().split(";") if t.strip()]
    if not items:
        raise ParseError("empty target vector")
    return np.array([_parse_pair(t, f"entry {k + 1}") for k, t in enumerate(items)])


def read_target_csv(path: str | os.PathLike) -> np.ndarray:
    """One ``re,im`` line per antenna; blank lines and ``#`` comments are skipped."""
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if line:
                entries.append(_parse_pair(line, f"{path}:{lineno}"))
    if not entries:
        raise ParseError(f"{path}: no entries")
    return np.array(entries)


def load_target(spec: str) -> np.ndarray:
    """A path to a target CSV, or an inline vector."""
    if os.path.isfile(spec):
        return read_target_csv(spec)
    return parse_target_inline(spec)


def target_to_csv(x: Sequence[complex]) -> str:
    return "".join(f"{float(z.real)!r},{float(z.imag)!r}\n" for z in np.asarray(x, dtype=complex))


def settings_to_dict(settings: TreeSettings) -> dict[str, Any]:
    return {
        "N": settings.n,
        "padded_from": settings.padded_from,
        "alphas": [[level, node, a] for level, node, a in settings.alpha_items()],
        "thetas": [float(t) for t in settings.thetas],
        "renormalized": settings.renormalized,
        "units": "radians",
    }


def settings_from_dict(data: dict[str, Any]) -> TreeSettings:
    try:
        n = int(data["N"])
        thetas = [float(t) for t in data["thetas"]]
        depth = tree_depth(n)
        alphas = [np.full(2 ** k, np.nan) for k in range(depth)]
        for level, node, value in data["alphas"]:
            level, node = int(level), int(node)
            if not (1 <= level <= depth and 1 <= node <= 2 ** (level - 1)):
                raise MalformedSettings(f"alpha index ({level}, {node}) outside tree of N={n}")
            alphas[level - 1][node - 1] = float(value)
        if any(np.isnan(a).any() for a in alphas):
            raise MalformedSettings("missing split angles")
        if len(thetas) != n:
            raise MalformedSettings(f"expected {n} thetas, got {len(thetas)}")
        return TreeSettings(tuple(alphas), np.array(thetas),
                            padded_from=int(data.get("padded_from", n)),
                            renormalized=bool(data.get("renormalized", False)))
    except MalformedSettings:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedSettings(f"malformed settings: {exc}") from exc


def save_settings(path: str | os.PathLike, settings: TreeSettings) -> None:
    atomic_write(path, json.dumps(settings_to_dict(settings), indent=2) + "\n")


def load_settings(path: str | os.PathLike) -> TreeSettings:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedSettings(f"{path}: {exc}") from exc
    return settings_from_dict(data)


def profile_from_dict(d: dict[str, Any]) -> TechProfile:
    """Profile JSON entry.

    Keys: name, t_tune_s, l_phi_db, p_phi_w, resolution ("discrete" or
    integer bits), optional l_hyb_db (default 0.12) and l_out_db (default l_phi_db).
    """
    try:
        res = d.get("resolution", "discrete")
        bits = None if res in (None, "discrete") else int(res)
        return TechProfile(
            name=str(d["name"]),
            t_tune=float(d["t_tune_s"]),
            l_phi=float(d["l_phi_db"]),
            p_phi=float(d["p_phi_w"]),
            resolution_bits=bits,
            l_hyb=float(d.get("l_hyb_db", 0.12)),
            l_out=None if d.get("l_out_db") is None else float(d["l_out_db"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad profile entry {d!r}: {exc}") from exc


def profile_to_dict(p: TechProfile) -> dict[str, Any]:
    return {
        "name": p.name,
        "resolution": "discrete" if p.resolution_bits is None else p.resolution_bits,
        "t_tune_s": p.t_tune,
        "l_phi_db": p.l_phi,
        "p_phi_w": p.p_phi,
        "l_hyb_db": p.l_hyb,
        "l_out_db": p.l_out,
    }


def load_profiles(path: str | os.PathLike | None = None) -> tuple[TechProfile, ...]:
    """Profiles from ``path``, else from $UNITARY_FANOUT_PROFILES, else the built-in defaults.

    The file holds either a list of profile objects or ``{"profiles": [...]}``.
    """
    path = path or os.environ.get(PROFILES_ENV)
    if not path:
        return DEFAULT_PROFILES
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("profiles")
    if not isinstance(data, list) or not data:
        raise ParseError(f"{path}: expected a non-empty list of profiles")
    profiles = tuple(profile_from_dict(d) for d in data)
    names = [p.name for p in profiles]
    if len(set(names)) != len(names):
        raise ParseError(f"{path}: duplicate profile names {names}")
    return profiles


def load_coeffs(path: str | os.PathLike | None = None) -> DigitalCoeffs:
    """Keys: alpha (W/chain), beta (W/W), optional p_sh (W) and valid_p_ant ([lo, hi] W)."""
    if not path:
        return DEFAULT_DIGITAL
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
        return DigitalCoeffs(
            alpha=float(d["alpha"]),
            beta=float(d["beta"]),
            p_sh=float(d.get("p_sh", 0.0)),
            valid_p_ant=tuple(float(v) for v in d.get("valid_p_ant", DEFAULT_DIGITAL.valid_p_ant)),
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: bad digital coefficients: {exc}") from exc


def to_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def matrix_to_csv(v: np.ndarray) -> str:
    """Row-major complex matrix; each entry becomes adjacent ``re_k,im_k`` columns."""
    v = np.asarray(v, dtype=complex)
    header = [f"{part}{k + 1}" for k in range(v.shape[1]) for part in ("re", "im")]
    rows = [[repr(float(x)) for z in row for x in (z.real, z.imag)] for row in v]
    return to_csv(header, rows)
