"""Tiny helper: build an argparse CLI from a dataclass config."""

import argparse
import dataclasses


def parse_config(cls, description):
    p = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        default = f.default
        if isinstance(default, (list, tuple)):
            p.add_argument(f"--{f.name.replace('_', '-')}", default=",".join(map(str, default)),
                           help=f"comma-separated (default {default})")
        else:
            p.add_argument(f"--{f.name.replace('_', '-')}", type=type(default), default=default)
    args = vars(p.parse_args())
    for f in dataclasses.fields(cls):
        if isinstance(f.default, (list, tuple)) and isinstance(args[f.name], str):
            kind = type(f.default[0])
            args[f.name] = tuple(kind(v) for v in args[f.name].split(","))
    return cls(**args)
