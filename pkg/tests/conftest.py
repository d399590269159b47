import json
import random

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from smallfrac.runner import load_schema

SCHEMA_NAMES = ["spec", "angle", "weyl", "meanvalue", "exponents", "minimize", "pipeline",
                "recover", "scan"]


@pytest.fixture
def rng():
    return random.Random(20240607)


@pytest.fixture(scope="session")
def validate():
    schemas = {f"{n}.schema.json": load_schema(n) for n in SCHEMA_NAMES}
    registry = Registry().with_resources(
        (uri, Resource.from_contents(s)) for uri, s in schemas.items())

    def _validate(doc, name):
        Draft202012Validator(schemas[f"{name}.schema.json"], registry=registry).validate(doc)
        return doc

    return _validate


def parse_csv(text):
    import csv
    import io

    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))
