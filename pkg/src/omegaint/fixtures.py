"""The two bundled scenario files."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

FIXTURES = ("quad", "wronskian")


def fixture_text(name):
    if name not in FIXTURES:
        raise KeyError(f"no bundled fixture {name!r}")
    return resources.files("omegaint").joinpath("data", f"{name}.scn").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load_fixture(name):
    from .runner import load_model

    return load_model(fixture_text(name))


def load_fixture_form(name):
    model = load_fixture(name)
    return next(iter(model.forms.values()))
