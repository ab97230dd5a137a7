"""Deterministic scans reproducing the worked examples.

Every scan returns a :class:`ScanResult` whose rows depend only on the
arguments and the seed.  Parallel work is split over a thread pool; random
samples draw from per-sample generators keyed by ``(seed, index)``, so the
thread count never changes the output.
"""
import io
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .criteria import (DETECTION_EPS, ent_criterion_C, normalform_criterion,
                       steer_criterion_C, steer_criterion_gamma)
from .errors import NoConvergence, RankDeficientMarginal
from .measurement import (dichotomy, gellmann_measurement,
                          orthogonal_measurement, pauli, scm, sic_parameters)
from .qstate import (PAULI, horodecki_noise, isotropic, ppt_positive,
                     random_hs, random_separable, werner)
from .uncertainty import uncertainty_bound

HORODECKI_P_WINDOW = (0.99, 1.0)
FIG3_CI = 10000
FIG3_FULL = 50000


@dataclass
class ScanResult:
    experiment_id: str
    grid: dict
    columns: list
    rows: list
    seed: int | None = None
    wall_time: float = 0.0
    summary: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)

    def to_csv(self):
        buf = io.StringIO()
        buf.write(','.join(self.columns) + '\n')
        for row in self.rows:
            buf.write(','.join('%.17g' % v for v in row) + '\n')
        return buf.getvalue()

    def to_json(self):
        return {'experiment_id': self.experiment_id, 'grid': self.grid, 'seed': self.seed,
                'columns': self.columns, 'rows': [list(map(float, r)) for r in self.rows],
                'summary': self.summary,
                'curves': {k: [list(map(float, p)) for p in v] for k, v in self.curves.items()},
                'wall_time': self.wall_time}

    def to_svg(self, width=640, height=400):
        return svg_polyline(self.curves, width, height, title=self.experiment_id)


def svg_polyline(curves, width=640, height=400, title=''):
    """Minimal SVG line chart, one polyline per named curve (NaN points dropped)."""
    pts = {k: [(x, y) for x, y in v if np.isfinite(x) and np.isfinite(y)] for k, v in curves.items()}
    allp = [p for v in pts.values() for p in v] or [(0.0, 0.0)]
    xs, ys = [p[0] for p in allp], [p[1] for p in allp]
    x0, x1 = min(xs), max(xs) if max(xs) > min(xs) else min(xs) + 1
    y0, y1 = min(ys), max(ys) if max(ys) > min(ys) else min(ys) + 1
    pad = 40
    colors = ['#d95f02', '#1f78b4', '#e31a1c', '#33a02c', '#6a3d9a']

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<text x="{pad}" y="20" font-size="14">{title}</text>',
           f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
           'fill="none" stroke="#888"/>']
    for i, (name, v) in enumerate(pts.items()):
        c = colors[i % len(colors)]
        coords = ' '.join(f'{sx(x):.2f},{sy(y):.2f}' for x, y in v)
        out.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{coords}"/>')
        out.append(f'<text x="{width - pad - 150}" y="{pad + 16 * (i + 1)}" fill="{c}" '
                   f'font-size="12">{name}</text>')
    out.append('</svg>')
    return '\n'.join(out)


def resolve_threads(threads=None):
    if threads is None:
        env = os.environ.get('QORRELATE_THREADS')
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def _pmap(fn, items, threads):
    items = list(items)
    n = resolve_threads(threads)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(n) as pool:
        return list(pool.map(fn, items))


def sample_rng(seed, index, stream=0):
    """Generator for sample ``index`` of stream ``stream`` under master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, index)))


def bisect_threshold(margin, lo, hi, iters=40, eps=DETECTION_EPS):
    """Smallest parameter in ``[lo, hi]`` with ``margin > eps``, assuming
    monotone detection; NaN when ``hi`` itself is not detected."""
    if not margin(hi) > eps:
        return float('nan')
    if margin(lo) > eps:
        return float(lo)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if margin(mid) > eps:
            hi = mid
        else:
            lo = mid
    return float(hi)


# -- bound entangled family with noise ------------------------------------------

def horodecki_measurements():
    a, h = sic_parameters(3)
    return orthogonal_measurement(3), scm(3, a, h)


def horodecki_margins(t, p):
    """``(CCNR, ESIC, gamma-normal-form)`` margins at one grid point."""
    om, sic = horodecki_measurements()
    rho = horodecki_noise(t, p)
    return (ent_criterion_C(rho, om, om).margin,
            ent_criterion_C(rho, sic, sic).margin,
            normalform_criterion(rho, 'gamma_nf').margin)


HORODECKI_CRITERIA = ('ccnr', 'esic', 'cor5')


def scan_horodecki(t_grid=None, p_grid=None, threads=None, bisect_iter=30):
    """Detection margins of CCNR, ESIC and the gamma normal-form bound on
    ``p rho_H(t) + (1 - p) I/9``.

    The default ``p`` window is ``[0.99, 1]``: all three boundaries sit above
    ``p = 0.99``, so a coarser window would see detection only at ``p = 1``.
    Boundary curves (minimal detected ``p`` for each ``t``) come from
    bisection on ``[0, 1]``.
    """
    t0 = time.perf_counter()
    t_grid = np.linspace(0, 1, 50) if t_grid is None else np.asarray(t_grid, dtype=float)
    p_grid = np.linspace(*HORODECKI_P_WINDOW, 50) if p_grid is None else np.asarray(p_grid, dtype=float)
    points = [(t, p) for t in t_grid for p in p_grid]
    margins = _pmap(lambda tp: horodecki_margins(*tp), points, threads)
    rows = [(t, p, *m) for (t, p), m in zip(points, margins)]

    def boundary(t):
        return tuple(bisect_threshold(lambda p, k=k: horodecki_margins(t, p)[k], 0.0, 1.0, bisect_iter)
                     for k in range(3))

    bounds = _pmap(boundary, t_grid, threads)
    curves = {name: [(t, b[k]) for t, b in zip(t_grid, bounds)]
              for k, name in enumerate(HORODECKI_CRITERIA)}
    counts = {name: int(sum(r[2 + k] > DETECTION_EPS for r in rows))
              for k, name in enumerate(HORODECKI_CRITERIA)}
    below_one = {name: int(sum(r[2 + k] > DETECTION_EPS and r[1] < 1 for r in rows))
                 for k, name in enumerate(HORODECKI_CRITERIA)}
    return ScanResult('horodecki',
                      {'t': t_grid.tolist(), 'p': p_grid.tolist(), 'bisect_iter': bisect_iter},
                      ['t', 'p', 'margin_ccnr', 'margin_esic', 'margin_cor5'], rows,
                      None, time.perf_counter() - t0,
                      {'detected': counts, 'detected_p_below_1': below_one}, curves)


# -- random two-qubit steering ----------------------------------------------------

def _hs_two_qubit(seed, index):
    return random_hs(4, sample_rng(seed, index))


def two_qubit_moments(states):
    """Batched ``(||gamma||_tr, V_A, V_B)`` for Pauli triples on both sides."""
    T = np.asarray(states).reshape(-1, 2, 2, 2, 2)
    rA = np.einsum('nabcb->nac', T)
    rB = np.einsum('nabad->nbd', T)
    xA = np.einsum('nij,mji->nm', rA, PAULI).real
    xB = np.einsum('nij,mji->nm', rB, PAULI).real
    C = np.einsum('nabcd,mca,kdb->nmk', T, PAULI, PAULI).real
    gamma = xA[:, :, None] * xB[:, None, :] - C
    gnorm = np.linalg.svd(gamma, compute_uv=False).sum(axis=1)
    return gnorm, 3 - (xA ** 2).sum(1), 3 - (xB ** 2).sum(1)


def scan_random_steering(n_states=FIG3_CI, xi_grid=None, seed=0, threads=None):
    """Fraction of Hilbert-Schmidt random two-qubit states detected by the
    scalar-``xi`` steering bound with Pauli triples, per ``xi``."""
    t0 = time.perf_counter()
    xi_grid = np.round(np.arange(1, 101) * 0.02, 10) if xi_grid is None else np.asarray(xi_grid, dtype=float)
    states = np.array(_pmap(lambda i: _hs_two_qubit(seed, i), range(n_states), threads))
    gnorm, VA, VB = two_qubit_moments(states)
    SB = uncertainty_bound(pauli()).value
    rows = []
    for xi in xi_grid:
        bound = (xi * xi * VA + VB - SB) / (2 * xi)
        f = float(np.mean(gnorm - bound > DETECTION_EPS))
        rows.append((float(xi), f, float(np.sqrt(f * (1 - f) / n_states))))
    k = int(np.argmax([r[1] for r in rows]))
    return ScanResult('random_steering', {'xi': xi_grid.tolist(), 'n_states': n_states},
                      ['xi', 'fraction', 'stderr'], rows, seed, time.perf_counter() - t0,
                      {'peak_fraction': rows[k][1], 'argmax_xi': float(rows[k][0]),
                       'stderr': float(rows[k][2])},
                      {'fraction': [(r[0], r[1]) for r in rows]})


# -- thresholds -------------------------------------------------------------------------

def werner_two_setting_threshold(delta):
    X = dichotomy(delta)
    return bisect_threshold(lambda p: steer_criterion_C(werner(p), X, X).margin, 0.0, 1.0)


def werner_om_threshold():
    om = orthogonal_measurement(2)
    return bisect_threshold(lambda p: steer_criterion_C(werner(p), om, om).margin, 0.0, 1.0)


def werner_reference(delta):
    """Published closed form ``sqrt(1 + sin(2 delta)/2)`` for the two-setting threshold."""
    return np.sqrt(1 + np.sin(2 * delta) / 2)


def werner_closed_form(delta):
    """``||C|| = 2p`` against ``sqrt(2) * sqrt(1 + |cos delta|)``."""
    return np.sqrt((1 + abs(np.cos(delta))) / 2)


def werner_thresholds(delta_grid=None, threads=None):
    """Bisected two-setting Werner steering thresholds and the OM threshold.

    Columns give the bisected ``p*``, the published formula and the closed
    form obtained from the bound constants used here; NaN means no detection
    for any ``p <= 1``.
    """
    t0 = time.perf_counter()
    grid = np.linspace(np.pi / 8, 7 * np.pi / 8, 13) if delta_grid is None else np.asarray(delta_grid, dtype=float)
    ps = _pmap(werner_two_setting_threshold, grid, threads)
    ref = [float(werner_reference(d)) for d in grid]
    cf = [float(werner_closed_form(d)) for d in grid]
    rows = [(d, p, r, c) for d, p, r, c in zip(grid, ps, ref, cf)]
    om = werner_om_threshold()
    return ScanResult('werner', {'delta': grid.tolist()},
                      ['delta', 'p_star', 'p_reference', 'p_closed_form'], rows, None,
                      time.perf_counter() - t0,
                      {'om_threshold': om, 'om_expected': float((2 * np.sqrt(2) - 1) / 3)},
                      {'p_star': [(d, p) for d, p in zip(grid, ps)],
                       'p_reference': [(d, r) for d, r in zip(grid, ref)]})


def isotropic_threshold(d):
    g = gellmann_measurement(d)
    return bisect_threshold(
        lambda eta: steer_criterion_gamma(isotropic(d, eta), g, g, xi=eta).margin, 1e-6, 1.0)


def isotropic_thresholds(d_list=(2, 3, 4), threads=None):
    """``eta*`` for the isotropic family with ``xi = eta``, against ``1/sqrt(d+1)``."""
    t0 = time.perf_counter()
    d_list = [int(d) for d in d_list]
    etas = _pmap(isotropic_threshold, d_list, threads)
    rows = [(d, e, float(1 / np.sqrt(d + 1))) for d, e in zip(d_list, etas)]
    return ScanResult('isotropic', {'d': d_list}, ['d', 'eta_star', 'eta_expected'], rows,
                      None, time.perf_counter() - t0, {},
                      {'eta_star': [(d, e) for d, e in zip(d_list, etas)]})


# -- normal-form criterion vs partial transpose ------------------------------------

AGREE, DISAGREE, BOUNDARY, NOT_CONVERGED, RANK_DEFICIENT = range(5)


def _ppt_row(seed, i, boundary):
    rho = _hs_two_qubit(seed, i)
    is_ppt, mn = ppt_positive(rho)
    try:
        v = normalform_criterion(rho, 'C_nf')
    except NoConvergence:
        return (i, np.nan, mn, 0, int(not is_ppt), NOT_CONVERGED)
    if not np.isfinite(v.margin):
        return (i, np.nan, mn, 0, int(not is_ppt), RANK_DEFICIENT)
    if abs(v.margin) < boundary or abs(mn) < boundary:
        status = BOUNDARY
    else:
        status = AGREE if v.detected == (not is_ppt) else DISAGREE
    return (i, v.margin, mn, int(v.detected), int(not is_ppt), status)


def _separable_false_positive(seed, i):
    rho = random_separable(2, sample_rng(seed, i, stream=1))
    try:
        return int(normalform_criterion(rho, 'C_nf').detected)
    except (NoConvergence, RankDeficientMarginal):
        return 0


def ppt_agreement(n_states=1000, seed=0, n_separable=1000, threads=None, boundary=1e-6):
    """Compare the normal-form correlation criterion with the partial-transpose
    test on random two-qubit states; also count detections on random
    separable mixtures (all of which would be false positives)."""
    t0 = time.perf_counter()
    rows = _pmap(lambda i: _ppt_row(seed, i, boundary), range(n_states), threads)
    status = np.array([r[5] for r in rows])
    fp = sum(_pmap(lambda i: _separable_false_positive(seed, i), range(n_separable), threads))
    decided = int(np.sum((status == AGREE) | (status == DISAGREE)))
    agree = int(np.sum(status == AGREE))
    summary = {'agreement_rate': agree / decided if decided else float('nan'),
               'agree': agree, 'disagree': int(np.sum(status == DISAGREE)),
               'boundary': int(np.sum(status == BOUNDARY)),
               'not_converged': int(np.sum(status == NOT_CONVERGED)),
               'rank_deficient': int(np.sum(status == RANK_DEFICIENT)),
               'separable_false_positives': int(fp), 'n_separable': n_separable,
               'disagreements': [list(map(float, r)) for r in rows if r[5] == DISAGREE]}
    return ScanResult('ppt_agreement', {'n_states': n_states, 'n_separable': n_separable},
                      ['index', 'margin_nf', 'ppt_min_eig', 'detected', 'npt', 'status'],
                      rows, seed, time.perf_counter() - t0, summary)
