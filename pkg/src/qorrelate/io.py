"""JSON encodings for matrices, measurements, states and verdicts."""
import json

import numpy as np

from .criteria import CriterionVerdict
from .errors import DimensionMismatch, InputError
from .matkernel import DEFAULT_TOL, as_matrix
from .measurement import (dichotomy, gellmann_measurement, identity_gellmann,
                          new_measurement, orthogonal_measurement, pauli,
                          qubit_pair, scm, sic_parameters)
from .qstate import (bell_diagonal, check_state, horodecki_3x3,
                     horodecki_noise, isotropic, random_hs, werner)


class InvalidJSON(InputError):
    pass


def load_json(text):
    """Parse inline JSON, ``@path`` file references, or bare preset names."""
    if isinstance(text, (dict, list)):
        return text
    text = text.strip()
    if text.startswith('@'):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if text.replace('_', '').isalnum():
            return {'preset': text}
        raise InvalidJSON(f'cannot parse JSON: {text[:60]!r}')


def matrix_to_json(M):
    M = np.asarray(M)
    if M.ndim != 2:
        raise DimensionMismatch('matrix_to_json expects a 2-D array')
    return {'rows': M.shape[0], 'cols': M.shape[1],
            're': np.real(M).tolist(), 'im': np.imag(M).tolist()}


def matrix_from_json(obj):
    try:
        re = np.asarray(obj['re'], dtype=float)
        im = np.asarray(obj.get('im', np.zeros_like(re)), dtype=float)
        shape = (int(obj['rows']), int(obj['cols']))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidJSON(f'bad matrix object: {exc}') from None
    if re.shape != shape or im.shape != shape:
        raise DimensionMismatch(f'matrix data does not match declared shape {shape}')
    return as_matrix(re + 1j * im)


def measurement_to_json(X):
    return {'dim': X.dim, 'observables': [matrix_to_json(o) for o in X.observables]}


def _req(obj, key, kind):
    if key not in obj:
        raise InvalidJSON(f'{kind} needs field {key!r}')
    return obj[key]


def measurement_from_json(obj, dim=None):
    """Explicit ``{"dim", "observables"}`` or ``{"preset": ...}``.

    Presets: ``scm`` (``d``, ``alpha``/``h`` or ``sic``), ``sic``, ``om``,
    ``pauli``, ``gellmann``, ``identity_gellmann`` (``h``), ``dichotomy``
    (``theta``, ``alpha``), ``qubit_pair`` (``n1``, ``n2``).  ``dim`` fills
    in ``d`` when the preset omits it.
    """
    obj = load_json(obj)
    if 'observables' in obj:
        mats = [matrix_from_json(m) for m in obj['observables']]
        if 'dim' in obj and any(m.shape != (obj['dim'], obj['dim']) for m in mats):
            raise DimensionMismatch('observable shape does not match "dim"')
        return new_measurement(np.array(mats))
    preset = _req(obj, 'preset', 'measurement')
    d = int(obj.get('d', obj.get('dim', dim or 2)))
    if preset == 'scm':
        if obj.get('sic'):
            a, h = sic_parameters(d)
        else:
            a, h = float(obj.get('alpha', 1.0)), float(obj.get('h', 0.0))
        return scm(d, a, h)
    if preset == 'sic':
        return scm(d, *sic_parameters(d))
    if preset == 'om':
        return orthogonal_measurement(d)
    if preset == 'pauli':
        return pauli()
    if preset == 'gellmann':
        return gellmann_measurement(d)
    if preset == 'identity_gellmann':
        return identity_gellmann(d, float(obj.get('h', 1.0)))
    if preset == 'dichotomy':
        return dichotomy(float(_req(obj, 'theta', 'dichotomy')), float(obj.get('alpha', 1.0)))
    if preset == 'qubit_pair':
        return qubit_pair(_req(obj, 'n1', 'qubit_pair'), _req(obj, 'n2', 'qubit_pair'))
    raise InvalidJSON(f'unknown measurement preset {preset!r}')


def state_from_json(obj, tol=DEFAULT_TOL):
    obj = load_json(obj)
    fam = _req(obj, 'family', 'state')
    try:
        if fam == 'werner':
            return werner(float(obj['p']))
        if fam == 'horodecki_noise':
            return horodecki_noise(float(obj['t']), float(obj['p']))
        if fam == 'horodecki':
            return horodecki_3x3(float(obj['t']))
        if fam == 'random_hs':
            n = int(obj['dim']) if 'dim' in obj else int(obj.get('d', 2)) ** 2
            return random_hs(n, int(obj.get('seed', 0)))
        if fam == 'bell_diagonal':
            return bell_diagonal(obj['t'], tol)
        if fam == 'isotropic':
            return isotropic(int(obj['d']), float(obj['eta']))
        if fam == 'explicit':
            return check_state(matrix_from_json(obj['matrix']), tol)
    except KeyError as exc:
        raise InvalidJSON(f'state family {fam!r} needs field {exc}') from None
    raise InvalidJSON(f'unknown state family {fam!r}')


def state_to_json(rho):
    return {'family': 'explicit', 'matrix': matrix_to_json(rho)}


def verdict_from_json(obj):
    obj = load_json(obj)
    try:
        return CriterionVerdict(obj['criterion'], float(obj['lhs']), float(obj['bound']),
                                float(obj['margin']), bool(obj['detected']),
                                params=dict(obj.get('params', {})))
    except KeyError as exc:
        raise InvalidJSON(f'verdict needs field {exc}') from None


def dumps(obj):
    return json.dumps(obj, indent=2, default=_default)


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(f'not JSON serialisable: {type(o).__name__}')
