"""System configuration: YAML ingestion, validation, and hashing.

A config file is a single YAML document (key/value pairs plus nested
lists) describing one system:

    name: my-system
    dimension: 4
    alphabet: 2
    matrices:            # one row-major list of d*d numbers per map
      - [ ... 16 numbers ... ]
      - [ ... 16 numbers ... ]
    translations:        # optional, one list of d numbers per map
      - [ ... 4 numbers ... ]
    iota: [2, 1]         # optional pairing permutation (image list)
    base_matrices:       # optional d_b x d_b factors for the pairing
      - [ ... ]
    fixture: thm1        # alternatively, a named fixture reference
    alpha1: 0.44         # fixture parameters (thm1/thm2 only)
    alpha2: 0.2
    theta: 1.0           # radians

When `fixture` is present it resolves to the named system and the other
structural fields must be absent.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np
import yaml

from .errors import ConfigError
from .fixtures import FIXTURE_NAMES, FixtureSystem, build_fixture
from .ifs import AffineIFS
from .words import MatrixTuple, SymbolPermutation

_FIXTURE_PARAM_KEYS = ("alpha1", "alpha2", "theta")
_STRUCTURAL_KEYS = ("dimension", "alphabet", "matrices", "translations", "iota", "base_matrices")


@dataclass(frozen=True)
class SystemConfig:
    """Validated system description, resolvable to tuples/IFS objects."""

    name: str
    dimension: int
    alphabet: int
    matrices: tuple
    translations: tuple | None
    iota: tuple | None
    base_matrices: tuple | None
    fixture: str | None
    params: dict

    def linear_tuple(self) -> MatrixTuple:
        d = self.dimension
        return MatrixTuple(
            tuple(np.array(m, dtype=float).reshape(d, d) for m in self.matrices)
        )

    def factor_base(self) -> tuple[MatrixTuple, SymbolPermutation]:
        if self.base_matrices is None or self.iota is None:
            raise ConfigError(
                "this command needs the Kronecker factorization: provide "
                "'base_matrices' and 'iota' (or use a fixture that has them)"
            )
        mats = []
        for i, flat in enumerate(self.base_matrices):
            db = int(round(len(flat) ** 0.5))
            if db * db != len(flat):
                raise ConfigError(f"base_matrices[{i}] length {len(flat)} is not a square")
            mats.append(np.array(flat, dtype=float).reshape(db, db))
        return MatrixTuple(tuple(mats)), SymbolPermutation(tuple(self.iota))

    def affine_ifs(self) -> AffineIFS:
        if self.translations is None:
            raise ConfigError("this command needs 'translations'")
        return AffineIFS(
            linear=self.linear_tuple(),
            translations=np.array(self.translations, dtype=float),
        )

    def canonical_dict(self) -> dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "alphabet": self.alphabet,
            "matrices": [list(map(float, m)) for m in self.matrices],
            "translations": None
            if self.translations is None
            else [list(map(float, v)) for v in self.translations],
            "iota": None if self.iota is None else list(self.iota),
            "base_matrices": None
            if self.base_matrices is None
            else [list(map(float, m)) for m in self.base_matrices],
            "fixture": self.fixture,
            "params": {k: self.params[k] for k in sorted(self.params)},
        }

    def config_hash(self) -> str:
        payload = json.dumps(self.canonical_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()


def _flatten_system(fs: FixtureSystem, params: dict) -> SystemConfig:
    return SystemConfig(
        name=fs.name,
        dimension=fs.linear.dim,
        alphabet=fs.linear.n_maps,
        matrices=tuple(tuple(m.ravel()) for m in fs.linear.matrices),
        translations=None
        if fs.ifs is None
        else tuple(tuple(v) for v in fs.ifs.translations),
        iota=None if fs.iota is None else fs.iota.images,
        base_matrices=None
        if fs.base is None
        else tuple(tuple(m.ravel()) for m in fs.base.matrices),
        fixture=fs.name,
        params=params,
    )


def fixture_config(name: str, **params) -> SystemConfig:
    if name not in FIXTURE_NAMES:
        raise ConfigError(
            f"unknown fixture {name!r}; expected one of {', '.join(FIXTURE_NAMES)}"
        )
    clean = {k: float(v) for k, v in params.items() if v is not None}
    if name == "eq1-3x3" and clean:
        raise ConfigError("fixture eq1-3x3 takes no parameters")
    try:
        fs = build_fixture(name, **clean)
    except Exception as exc:
        raise ConfigError(f"fixture {name!r}: {exc}") from exc
    return _flatten_system(fs, clean)


def _require(data: dict, key: str, kind, where: str):
    if key not in data:
        raise ConfigError(f"{where}: missing required field '{key}'")
    value = data[key]
    if not isinstance(value, kind):
        raise ConfigError(
            f"{where}: field '{key}' must be {kind.__name__}, got {type(value).__name__}"
        )
    return value


def _number_list(raw, key: str, expected_len: int, where: str) -> tuple:
    if not isinstance(raw, (list, tuple)):
        raise ConfigError(f"{where}: '{key}' entries must be lists of numbers")
    if len(raw) != expected_len:
        raise ConfigError(
            f"{where}: '{key}' entry has {len(raw)} numbers, expected {expected_len}"
        )
    try:
        return tuple(float(x) for x in raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: '{key}' entry contains a non-number") from exc


def parse_config(data: dict, where: str = "config") -> SystemConfig:
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: top level must be a mapping")
    unknown = (
        set(data)
        - set(_STRUCTURAL_KEYS)
        - set(_FIXTURE_PARAM_KEYS)
        - {"name", "fixture"}
    )
    if unknown:
        raise ConfigError(f"{where}: unknown fields {sorted(unknown)}")

    if "fixture" in data:
        extra = set(data) & set(_STRUCTURAL_KEYS)
        if extra:
            raise ConfigError(
                f"{where}: 'fixture' cannot be combined with {sorted(extra)}"
            )
        params = {k: data[k] for k in _FIXTURE_PARAM_KEYS if k in data}
        return fixture_config(str(data["fixture"]), **params)

    name = str(data.get("name", "unnamed"))
    d = _require(data, "dimension", int, where)
    n = _require(data, "alphabet", int, where)
    if d < 1 or n < 1:
        raise ConfigError(f"{where}: dimension and alphabet must be positive")
    raw_mats = _require(data, "matrices", list, where)
    if len(raw_mats) != n:
        raise ConfigError(
            f"{where}: got {len(raw_mats)} matrices for alphabet size {n}"
        )
    matrices = tuple(
        _number_list(m, "matrices", d * d, where) for m in raw_mats
    )

    translations = None
    if data.get("translations") is not None:
        raw_tr = data["translations"]
        if not isinstance(raw_tr, list) or len(raw_tr) != n:
            raise ConfigError(f"{where}: 'translations' must list {n} vectors")
        translations = tuple(
            _number_list(v, "translations", d, where) for v in raw_tr
        )

    iota = None
    if data.get("iota") is not None:
        raw_iota = data["iota"]
        if not isinstance(raw_iota, list):
            raise ConfigError(f"{where}: 'iota' must be a list of images")
        try:
            iota = SymbolPermutation(tuple(int(x) for x in raw_iota)).images
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: 'iota' is not a permutation: {exc}") from exc
        if len(iota) != n:
            raise ConfigError(f"{where}: 'iota' must have {n} images")

    base_matrices = None
    if data.get("base_matrices") is not None:
        raw_base = data["base_matrices"]
        if not isinstance(raw_base, list) or len(raw_base) != n:
            raise ConfigError(f"{where}: 'base_matrices' must list {n} matrices")
        base_matrices = tuple(
            _number_list(m, "base_matrices", len(raw_base[0]), where)
            for m in raw_base
        )

    config = SystemConfig(
        name=name,
        dimension=d,
        alphabet=n,
        matrices=matrices,
        translations=translations,
        iota=iota,
        base_matrices=base_matrices,
        fixture=None,
        params={},
    )
    try:
        config.linear_tuple()
    except Exception as exc:
        raise ConfigError(f"{where}: invalid matrices: {exc}") from exc
    return config


def load_config(path) -> SystemConfig:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from exc
    return parse_config(data, where=str(path))
