import json
import math

import numpy as np
import pytest

from swapchain.table import Table, format_value


@pytest.mark.parametrize("value, text", [
    (None, ""), (True, "true"), (np.bool_(False), "false"), (3, "3"), (np.int64(7), "7"),
    (0.1, "0.10000000000000001"), (math.inf, "inf"), (-math.inf, "-inf"), ("x", "x"),
])
def test_format_value(value, text):
    assert format_value(value) == text


def test_float_text_round_trips():
    for x in (1 / 3, math.pi, 1e-300, 0.7071067811865476):
        assert float(format_value(x)) == x


def test_csv_and_json():
    t = Table(("a", "b"))
    t.append(1, None)
    t.append(0.5, True)
    assert t.to_csv() == "a,b\n1,\n0.5,true\n"
    doc = json.loads(t.to_json({"steps": 2}, note="x"))
    assert doc == {"config": {"steps": 2}, "rows": [{"a": 1, "b": None}, {"a": 0.5, "b": True}], "note": "x"}
    with pytest.raises(ValueError):
        t.append(1)
    assert t.column("a") == [1, 0.5] and len(t) == 2
