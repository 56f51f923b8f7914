import json
import math

import numpy as np
import pytest

from heisgeo.errors import MalformedInput
from heisgeo.serialization import (covector_from_dict, dumps, lattice_from_dict, metric_from_dict,
                                   options_from_dict, point_from_dict)


def test_float_roundtrip_exact(rng):
    values = list(rng.uniform(-1e6, 1e6, 50)) + [0.1, 1 / 3, np.pi, 1e-300, 2**-52]
    text = dumps({"v": values})
    back = json.loads(text)["v"]
    assert back == [float(v) for v in values]


def test_seventeen_digit_format():
    assert dumps(1 / 3) == "0.33333333333333331"
    assert dumps(0.5) == "0.5"
    assert dumps(-0.0) == "0"


def test_infinity_literals():
    text = dumps({"a": math.inf, "b": -math.inf})
    assert text == '{"a": Infinity, "b": -Infinity}'
    assert json.loads(text)["a"] == math.inf


def test_numpy_and_nested():
    payload = {"m": np.eye(2), "t": (1, 2.5), "flag": True, "none": None}
    assert json.loads(dumps(payload)) == {"m": [[1.0, 0.0], [0.0, 1.0]],
                                          "t": [1, 2.5], "flag": True, "none": None}


def test_string_escaping():
    assert dumps({"k": 'a"b\\c'}) == '{"k": "a\\"b\\\\c"}'


def test_metric_parser_roundtrip():
    m = metric_from_dict({"n": 1, "A_tilde": [[2, 0], [0, 2]], "rho": -1.5})
    assert m.rho == 1.5 and m.n == 1


def test_missing_field_pointer():
    with pytest.raises(MalformedInput) as err:
        metric_from_dict({"n": 1, "rho": 0.0})
    assert err.value.field == "metric.A_tilde"
    with pytest.raises(MalformedInput) as err:
        lattice_from_dict({"n": 2})
    assert err.value.field == "lattice.r"


def test_point_and_covector_parsers():
    p = point_from_dict({"x": [1.0], "y": [0.0], "z": 0.5})
    assert p.z == 0.5
    c = covector_from_dict({"p_x": [1.0], "p_y": [2.0], "p_z": -1.0})
    assert c.p_z == -1.0


def test_unknown_option_rejected():
    with pytest.raises(MalformedInput):
        options_from_dict({"bisections": 3})
    opts = options_from_dict({"brackets": 32})
    assert opts.brackets == 32
