"""Generated comparison reports shipped under docs/.

Two analytic expressions in this package are retained verbatim even
though they disagree with the numeric ground truth; the policy is to
quantify and publish the disagreement instead of silently correcting it.
This module regenerates those documents:

* docs/discrepancy_report.md - closed-form contrast vs the numeric trace
  (including the time-rescaling diagnosis), and the quoted
  recombination-weighted closed form vs the quadrature route.
* docs/measured_values.md - measured quantities that the README cites:
  the nuclear-polarization amplitude ratio (with the independence
  argument), the stroboscopic control margin, and the echo-discrimination
  separations.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from rpsense import control, dynamics
from rpsense.control import RPStateLabel
from rpsense.dynamics import TimeGrid
from rpsense.spincore import RadicalPairParams

FIG_DEFAULTS = dict(h_a=1.0, g=0.1, kappa=0.01, gamma=0.0)


def _amplitude(values: np.ndarray) -> float:
    return (values.max() - values.min()) / 2


def closed_form_report() -> str:
    grid = TimeGrid(0.0, 200.0, 2001)
    omegas = (0.0, 0.5, 1.0)
    p = RadicalPairParams(**FIG_DEFAULTS)
    scan = dynamics.closed_form_discrepancy(p, omegas, grid)

    # diagnosis: the closed form equals the numeric trace at doubled time
    rescaled = 0.0
    half_grid = TimeGrid(0.0, 100.0, 2001)
    for w in omegas:
        q = p.replace(omega=w)
        cf = dynamics.sensor_contrast_closed_form(q, half_grid.times)
        num_at_2t = dynamics.phase_series(*dynamics._contrast_spectrum(q), 2 * half_grid.times)
        rescaled = max(rescaled, float(np.abs(cf - num_at_2t).max()))

    lines = [
        "# Closed-form discrepancy report",
        "",
        "This file is generated by `rpsense.reports`; regenerate with",
        "`python -m rpsense.reports`.",
        "",
        "## Closed-form contrast vs numeric trace",
        "",
        "The numeric two-branch trace (`sensor_contrast_numeric`) is the",
        "ground truth.  The closed-form expression",
        "(`sensor_contrast_closed_form`) is implemented verbatim and",
        "compared on the standard grid (g = 0.1 h_a, omega/h_a in",
        f"{list(omegas)}, t in [0, 200]/h_a, 2001 points).",
        "",
        f"* max |closed_form - numeric| = {scan.max_deviation:.6e}",
        f"* worst point: omega = {scan.worst_point['omega']}, t = {scan.worst_point['t']:.4f}",
        f"* agreement to 1e-8: {'yes' if scan.matched else 'NO'}",
        "",
        "### Diagnosis",
        "",
        "The mismatch is a pure operator-normalization convention: the",
        "closed form corresponds to electron operators with eigenvalues",
        "+-1 (doubled) while this package uses spin-1/2 operators",
        "(eigenvalues +-1/2), the convention fixed by the one-proton",
        "singlet-probability checks (acceptance AC-1/AC-2).  Concretely",
        "closed_form(t) = numeric(2t):",
        "",
        f"* max |closed_form(t) - numeric(2t)| = {rescaled:.6e} over the same grid",
        "",
        "Neither expression is altered; scans and yields use the numeric",
        "route only.",
        "",
        "## Recombination-weighted closed form",
        "",
        "The quoted closed form for the recombination-weighted contrast",
        "(`contrast_yield_closed_form`) is dimensionally inconsistent as",
        "printed (mixed powers in the Lorentzian denominators and an",
        "unattached brace group) and is evaluated under the documented",
        "minimal reading.  Comparison at g = 0.1 h_a, kappa_tilde = 0.01 h_a:",
        "",
    ]
    for w in omegas:
        q = p.replace(omega=w)
        quoted = dynamics.contrast_yield_closed_form(q)
        quad = dynamics.contrast_yield_numeric(q)
        exact = dynamics.contrast_yield_analytic(q)
        lines.append(
            f"* omega = {w}: quoted = {quoted:.9f}, quadrature(numeric) = {quad:.9f}, "
            f"exact transform of closed form = {exact:.9f}"
        )
    lines += [
        "",
        "The exact term-by-term transform of the closed-form contrast",
        "(`contrast_yield_analytic`, four Lorentzians) matches quadrature",
        "of the closed-form series to the quadrature tolerance and shares",
        "its frequency structure with the quoted expression, whose",
        "coefficients appear corrupted (1/8 vs 1/2 prefactors, single",
        "instead of squared rate factors).  The quoted form is retained",
        "for comparison only.",
        "",
    ]
    return "\n".join(lines)


def measured_values_report() -> str:
    p = RadicalPairParams(**FIG_DEFAULTS)
    grid = TimeGrid(0.0, 200.0, 2001)

    # nuclear polarization: amplitude ratio of the Ramsey contrast
    ratios = {}
    for w in (0.0, 0.5, 1.0):
        q = p.replace(omega=w)
        thermal = dynamics.sensor_contrast_numeric(q, grid).normalized
        polarized = dynamics.sensor_contrast_numeric(
            q.replace(nuclear_polarization=1.0), grid).normalized
        ratios[w] = _amplitude(polarized) / _amplitude(thermal)

    # stroboscopic control margin
    taus = np.linspace(0.5, 20.0, 40)
    _, y0 = control.controlled_yield_scan(p, taus, 0)
    _, y4 = control.controlled_yield_scan(p, taus, 4)
    margin = float(np.abs(y4 - y0).max())

    # echo discrimination separations (frozen pair, pi/2 variant)
    taus2 = np.linspace(0.0, 50.0, 501)
    curves = {
        s: control.teer_contrast(p, s, taus2, variant="pi2").values
        for s in RPStateLabel
    }
    labels = list(RPStateLabel)
    seps = {}
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            seps[f"{a.value} vs {b.value}"] = float(np.abs(curves[a] - curves[b]).max())

    lines = [
        "# Measured values",
        "",
        "Generated by `rpsense.reports`; regenerate with `python -m rpsense.reports`.",
        "All numbers use h_a = 1, g = 0.1, kappa_tilde = 0.01 unless noted.",
        "",
        "## Nuclear polarization and the Ramsey contrast",
        "",
        "Oscillation amplitude (half of max - min over t in [0, 200]) of the",
        "normalized Ramsey contrast, fully polarized nucleus vs thermal:",
        "",
    ]
    for w, r in ratios.items():
        lines.append(f"* omega = {w}: amplitude ratio = {r:.12f}")
    lines += [
        "",
        "The ratio is exactly 1: the two-branch Ramsey trace is independent",
        "of the initial nuclear state.  Total Jz conservation makes the",
        "nuclear-space kernel <S| exp(-iH1 t) exp(+iH0 t) |S> diagonal, and",
        "the electron-nucleus flip symmetry (x-Paulis on all three spins,",
        "which maps omega, g -> -omega, -g and leaves the trace invariant)",
        "equalizes its two diagonal entries, so every nuclear density",
        "matrix gives the same contrast.  A polarization-enhanced sensor",
        "contrast therefore does not exist in this model; the acceptance",
        "criterion that expects a ~2x enhancement (AC-8) fails honestly",
        "and is documented in the README.",
        "",
        "For context, quantities that do depend on polarization:",
        "",
    ]
    for w in (0.0, 0.5, 1.0):
        q = p.replace(omega=w)
        amp = {}
        for pol in (0.0, 1.0):
            qq = q.replace(nuclear_polarization=pol)
            s0 = dynamics.singlet_probability_series(qq, grid).values
            s1 = dynamics.singlet_probability_series(
                qq.replace(omega=qq.omega + qq.g), grid).values
            amp[pol] = _amplitude(s1 - s0)
        lines.append(
            f"* omega = {w}: branch-difference P_S amplitude ratio (p=1 / p=0) = "
            f"{amp[1.0] / amp[0.0]:.4f}"
        )
    lines += [
        "",
        "## Stroboscopic control margin",
        "",
        f"max over tau in [0.5, 20] of |yield(M=4, tau) - yield(M=0)| = {margin:.6f}",
        "(well above the 1e-3 demonstration threshold).",
        "",
        "## Echo discrimination separations (pi/2 variant, frozen pair)",
        "",
    ]
    for k, v in seps.items():
        lines.append(f"* L-inf separation {k}: {v:.6f}")
    lines += [
        "",
        "T+ vs T- is zero to machine precision: with any product pulse on",
        "the two electrons and the echo's cosine readout, the T+ and T-",
        "curves coincide identically (for every 2x2 unitary u,",
        "|<s'|u|s>| = |<s'-bar|u|s-bar>|, and the frozen phases are odd",
        "under the global flip, so the two signals are complex conjugates).",
        "The corresponding clause of acceptance criterion AC-6 fails",
        "honestly; see README.",
        "",
    ]
    return "\n".join(lines)


def write_all(docs_dir) -> list[Path]:
    docs = Path(docs_dir)
    docs.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in (
        ("discrepancy_report.md", closed_form_report()),
        ("measured_values.md", measured_values_report()),
    ):
        path = docs / name
        path.write_text(text, encoding="utf-8")
        paths.append(path)
    return paths


def main() -> int:
    root = Path(__file__).resolve().parents[2]
    for path in write_all(root / "docs"):
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
