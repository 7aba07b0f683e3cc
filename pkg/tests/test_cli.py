import json
import subprocess
import sys

import pytest

from eotransduce.cli import RunConfig, load_config, main, parse_config
from eotransduce.errors import ValidationError
from eotransduce.params import SystemParams


@pytest.fixture
def write_config(tmp_path):
    def write(data, name="cfg.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data) if not isinstance(data, str) else data)
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_empty_config_is_default_device(write_config):
    cfg = load_config(write_config({}))
    assert cfg.params == SystemParams()
    assert cfg.params.conventions.occupancy_extra_two_pi is False


def test_negative_rate_names_key(write_config):
    with pytest.raises(ValidationError) as err:
        load_config(write_config({"gamma_m_hz": -1}))
    assert err.value.field == "gamma_m_hz"


@pytest.mark.parametrize("data,key", [
    ({"gamma_x_hz": 1.0}, "gamma_x_hz"),
    ({"conventions": {"typo": True}}, "conventions.typo"),
    ({"conventions": {"occupancy_extra_two_pi": 1}}, "conventions.occupancy_extra_two_pi"),
    ({"g_o_hz": "6.6"}, "g_o_hz"),
    ({"output": {"format": "xml"}}, "output.format"),
])
def test_rejections(data, key):
    with pytest.raises(ValidationError) as err:
        parse_config(data)
    assert err.value.field == key


def test_flag_passthrough():
    cfg = parse_config({"conventions": {"occupancy_extra_two_pi": True}})
    assert cfg.params.conventions.occupancy_extra_two_pi
    assert not cfg.params.conventions.gamma_m_extra_division


def test_round_trip(write_config):
    cfg = parse_config({"temperature_k": 0.01, "conventions": {"gamma_m_extra_division": True},
                        "output": {"precision": 12}})
    again = load_config(write_config(cfg.to_dict()))
    assert again == cfg
    assert RunConfig().to_dict() == parse_config(RunConfig().to_dict()).to_dict()


def test_bad_json(write_config, capsys):
    code, out, err = run(capsys, "info", "--config", write_config("{not json"))
    assert code == 1 and out == "" and "invalid JSON" in err


def test_validation_exit_code(write_config, capsys):
    code, out, err = run(capsys, "info", "--config", write_config({"gamma_m_hz": -1}))
    assert code == 1 and "gamma_m_hz" in err and out == ""


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "efficiency", "--ns", "0")
    assert code == 1 and "n_s" in err


def test_numerical_error_exit_code(capsys, monkeypatch):
    from eotransduce import cli
    from eotransduce.errors import NumericalError

    def boom(*a, **k):
        raise NumericalError("singular")

    monkeypatch.setattr(cli, "extract_k_coefficients", boom)
    code, _, err = run(capsys, "capacity")
    assert code == 2 and "singular" in err


def test_efficiency_json(capsys):
    code, out, _ = run(capsys, "efficiency")
    data = json.loads(out)
    assert code == 0
    assert data["r0"] == pytest.approx(0.328, abs=2e-3)
    assert '"r0": 0.32680642866544407' in out  # 17 significant digits


def test_capacity_reference_profile(write_config, capsys):
    cfg = write_config({"conventions": {"occupancy_extra_two_pi": True}})
    code, out, _ = run(capsys, "capacity", "--config", cfg)
    assert code == 0
    assert json.loads(out)["p"] == pytest.approx(0.304, abs=3e-3)


def test_sweep_ns_csv(capsys):
    code, out, _ = run(capsys, "sweep-ns", "--points", "5", "--min", "0.01", "--max", "100")
    lines = out.split("\n")
    assert code == 0
    assert lines[0] == "ns,ln_tmsv,ln_ctmg,ratio"
    assert len([l for l in lines[1:] if l]) == 5
    assert out.endswith("\n") and "\r" not in out


def test_sweep_bytes_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for dest in (a, b):
        assert main(["sweep-loss", "--points", "7", "--objective", "ln", "--out", str(dest)]) == 0
    assert a.read_bytes() == b.read_bytes()
    header = a.read_text().splitlines()[0]
    assert header == "gamma_o_hz,gamma_e_hz,ln"
    assert len(a.read_text().splitlines()) == 1 + 49


@pytest.mark.parametrize("command", ["info", "coeffs", "ln", "optimize-efficiency"])
def test_json_commands(command, capsys):
    code, out, _ = run(capsys, command)
    assert code == 0
    json.loads(out)


def test_coeffs_passive(capsys):
    _, out, _ = run(capsys, "coeffs", "--omega-hz", "1e5")
    assert json.loads(out)["total_weight"] == pytest.approx(1.0, abs=1e-12)


def test_scalar_csv(capsys):
    code, out, _ = run(capsys, "ln", "--ns", "1", "--format", "csv")
    header, row = out.splitlines()
    assert code == 0 and header.startswith("ns,omega_hz,xi_minus")


def test_sweep_json(capsys):
    _, out, _ = run(capsys, "sweep-ns", "--points", "3", "--format", "json")
    data = json.loads(out)
    assert data["columns"] == ["ns", "ln_tmsv", "ln_ctmg", "ratio"] and len(data["rows"]) == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "eotransduce", "efficiency"],
                          capture_output=True, text=True, check=True)
    assert "r0" in proc.stdout
