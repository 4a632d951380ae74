"""
Bridge between YAML profiles and the arithmetic layer.

resolve_params() turns the field/params sections into a TowerParams;
apply_overrides() lays the command-line flags over a loaded profile.
"""

import dataclasses
import logging
from argparse import Namespace

import numpy as np

from src.core.config_loader import ProfileConfig
from src.core.parser import parse_element
from src.drinfeld.errors import ConfigError, NuNotFound
from src.drinfeld.ff import make_field
from src.drinfeld.params import Mode, TowerParams, build_params, split_prime_power

logger = logging.getLogger(__name__)

# How many random t values a specialized profile without t_point may try.
T_POINT_ATTEMPTS = 64

_OVERRIDES = {
    "zeta": ("field", "zeta"),
    "mode": ("params", "mode"),
    "eta": ("params", "eta"),
    "t_point": ("params", "t_point"),
    "nu_index": ("params", "nu_index"),
    "seed": ("verification", "seed"),
    "samples": ("verification", "specializations"),
    "workers": ("enumeration", "workers"),
    "format": ("output", "format"),
}


def apply_overrides(config: ProfileConfig, args: Namespace) -> ProfileConfig:
    """Copy of config with every CLI flag that was given laid over it."""
    config = dataclasses.replace(
        config,
        field=dataclasses.replace(config.field),
        params=dataclasses.replace(config.params),
        verification=dataclasses.replace(config.verification),
        enumeration=dataclasses.replace(config.enumeration),
        output=dataclasses.replace(config.output),
    )
    if getattr(args, "q", None) is not None:
        p, e = split_prime_power(args.q)
        config.field.p, config.field.q_exponent = p, e
    for flag, (section, key) in _OVERRIDES.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(getattr(config, section), key, value)
    return config


def resolve_params(config: ProfileConfig) -> TowerParams:
    """
    Build the TowerParams a profile describes.

    A specialized profile without t_point draws t from F_{q^4} with the
    verification seed.

    Raises:
        ConfigError: naming the offending field
        NuNotFound: no nu inside the element bound
    """
    p, e = config.field.p, config.field.q_exponent
    q = config.field.q
    split_prime_power(q)
    fq2, fq4 = make_field(p, 2 * e), make_field(p, 4 * e)
    zeta = parse_element(config.field.zeta, fq2, "field.zeta") if config.field.zeta is not None else None
    eta = parse_element(config.params.eta, fq2, "params.eta") if config.params.eta is not None else None
    mode = Mode(config.params.mode)
    common = dict(
        q=q, zeta=zeta, eta=eta, mode=mode,
        zeta_modulus=config.field.zeta_modulus, nu_index=config.params.nu_index,
    )

    if mode is Mode.REDUCED or config.params.t_point is not None:
        t_point = None
        if config.params.t_point is not None:
            t_point = parse_element(config.params.t_point, fq4, "params.t_point")
        return build_params(**common, t_point=t_point)

    rng = np.random.default_rng(config.verification.seed)
    for _ in range(T_POINT_ATTEMPTS):
        t_point = fq4.random(rng)
        try:
            params = build_params(**common, t_point=t_point)
        except (ConfigError, NuNotFound) as exc:
            logger.debug(f"t = {int(t_point)} rejected: {exc}")
            continue
        logger.info(f"Drew t = {int(t_point)} with seed {config.verification.seed}")
        return params
    raise ConfigError(f"no admissible t in {fq4} after {T_POINT_ATTEMPTS} draws (field: params.t_point)")
