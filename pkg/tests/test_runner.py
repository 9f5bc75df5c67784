"""
Tests para el despacho de subcomandos, verify-paper y el CLI
"""

import json
from dataclasses import replace
from fractions import Fraction

import pytest

from config.settings import (
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_VERDICT_NEGATIVE,
    SAMPLE_FAMILY_FILE,
    SAMPLE_LIFTING_FILE,
    SAMPLE_SURFACE_FILE,
    SAMPLE_WEIGHTS_FILE,
)
from main import main
from src.errors import BadParameters
from src.formats import dump_json
from src.runner import RunConfig, build_report, dispatch, exit_code, run, verify_paper


class TestRunConfig:
    """Validación de la configuración"""

    def test_unknown_subcommand(self):
        """Test: subcomando inexistente"""
        with pytest.raises(BadParameters):
            RunConfig(subcommand="chat")

    def test_eps_range(self):
        """Test: 0 < e < 1"""
        with pytest.raises(BadParameters):
            RunConfig(subcommand="walls", eps=Fraction(1))

    def test_to_json(self):
        """Test: e se serializa como cadena"""
        config = RunConfig(subcommand="walls", d=2, n=6, eps=Fraction(1, 100))
        assert config.to_json()["eps"] == "1/100"


class TestDispatch:
    """Un resultado por subcomando"""

    def test_walls(self):
        """Test: t(2,6) está sobre tres paredes"""
        result = dispatch(RunConfig(subcommand="walls", d=2, n=6))
        assert result["success"]
        assert result["data"]["walls"][0] == {"I": [1, 2], "k": 2}
        assert len(result["data"]["walls"]) == 3

    def test_segment(self):
        """Test: u0 simbólico"""
        result = dispatch(RunConfig(subcommand="segment", d=2, n=6))
        (crossing,) = result["data"]["crossings"]
        assert crossing["u0"] == "(1 - 3*e)/(1 - 2*e)"
        assert crossing["wall"] == {"I": [4, 5, 6], "k": 1}

    def test_segment_rational(self):
        """Test: en modo racional u0 es un número"""
        result = dispatch(RunConfig(subcommand="segment", d=2, n=6, eps=Fraction(1, 100)))
        assert result["data"]["crossings"][0]["u0"] == "97/98"

    def test_chamber(self):
        """Test: t(1,6) y el archivo de ejemplo comparten cámara"""
        result = dispatch(RunConfig(subcommand="chamber", d=1, n=6, b="t", b2=SAMPLE_WEIGHTS_FILE))
        assert result["data"]["same_chamber"]
        assert result["data"]["b_in_closure_of_b2"]

    def test_chamber_shape_mismatch(self):
        """Test: el archivo no coincide con (d, n)"""
        result = dispatch(RunConfig(subcommand="chamber", d=2, n=6, b="t", b2=SAMPLE_WEIGHTS_FILE))
        assert not result["success"]
        assert result["error"] == "INPUT_ERROR"

    def test_stability(self):
        """Test: la configuración e no es nt-lc; testigo {4, 5, 6}"""
        result = dispatch(RunConfig(subcommand="stability", weights="nt", source="e_config", d=2, n=6))
        data = result["data"]
        assert data["status"] == "NotLC"
        assert data["witness"]["support"] == [4, 5, 6]
        assert data["e_type"]

    def test_stability_requires_dimensions(self):
        """Test: e_config sin --d/--n"""
        result = dispatch(RunConfig(subcommand="stability", source="e_config"))
        assert result["error"] == "INPUT_ERROR"

    def test_ample_blowup(self):
        """Test: intersecciones del divisor log de la degeneración"""
        result = dispatch(RunConfig(subcommand="ample", d=2, n=6))
        assert result["data"]["pairings"] == {"e": "1 - 3*e", "f": "e", "s": "1 - 2*e"}
        assert result["data"]["ample"]

    def test_ample_pairing(self):
        """Test: O(1,1) sobre P¹×P¹"""
        result = dispatch(RunConfig(subcommand="ample", model="pairing", surface=SAMPLE_SURFACE_FILE))
        assert result["data"]["pairings"] == {"ruling1": "1", "ruling2": "1"}
        assert result["data"]["ample"]

    def test_replace(self):
        """Test: familia de ejemplo"""
        result = dispatch(RunConfig(subcommand="replace", family=SAMPLE_FAMILY_FILE))
        data = result["data"]
        assert data["s"] == 1
        assert data["classes"] == [[4], [5], [6]]
        assert [s["expr"] for s in data["sections"]] == ["-5 - x_2", "-3/2", "-1 - 2*x_2"]
        assert data["valid"]

    def test_mixedsub_lifting(self):
        """Test: el defecto del levantamiento de ejemplo"""
        result = dispatch(RunConfig(subcommand="mixedsub", lifting=SAMPLE_LIFTING_FILE))
        data = result["data"]
        assert data["fine"]
        assert len(data["cells"]) == 10
        assert [(x["point"], x["sides"]) for x in data["defects"]] == [(["2", "2"], [3])]
        assert len(data["fiber_vertex"]) == 4

    def test_mixedsub_random(self):
        """Test: levantamiento aleatorio reproducible"""
        config = RunConfig(subcommand="mixedsub", d=2, m=3, seed=4)
        assert dispatch(config) == dispatch(config)
        assert len(dispatch(config)["data"]["cells"]) == 6

    def test_missing_file(self, tmp_path):
        """Test: archivo inexistente da INPUT_ERROR"""
        result = dispatch(RunConfig(subcommand="replace", family=str(tmp_path / "no.json")))
        assert result == {
            "success": False,
            "error": "INPUT_ERROR",
            "message": result["message"],
            "details": {"path": str(tmp_path / "no.json")},
        }


class TestVerifyPaper:
    """Batería completa de identidades"""

    def test_symbolic(self):
        """Test: todas las comprobaciones se cumplen con e simbólico"""
        result = verify_paper()
        data = result["data"]
        failed = [c["name"] for c in data["checks"] if not c["holds"]]
        assert failed == []
        assert data["all_hold"]
        assert data["passed"] == data["total"]
        assert len(data["chain_notes"]) == 1

    def test_rational(self):
        """Test: también con e = 1/1000"""
        assert verify_paper(Fraction(1, 1000))["data"]["all_hold"]


class TestExitCodes:
    """0 éxito, 1 veredicto negativo, 2 error"""

    def test_codes(self):
        """Test: mapeo de resultados a códigos"""
        assert exit_code("walls", {"success": True, "data": {}}) == EXIT_OK
        assert exit_code("walls", {"success": False, "error": "X"}) == EXIT_INPUT_ERROR
        negative = {"success": True, "data": {"all_hold": False}}
        assert exit_code("verify-paper", negative) == EXIT_VERDICT_NEGATIVE

    def test_run_writes_output(self, tmp_path):
        """Test: --output escribe el reporte y es determinista"""
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for path in (first, second):
            code = run(RunConfig(subcommand="segment", d=1, n=5, output=str(path)))
            assert code == EXIT_OK
        assert first.read_text(encoding="utf-8") == second.read_text(encoding="utf-8")
        report = json.loads(first.read_text(encoding="utf-8"))
        assert report["subcommand"] == "segment"
        assert report["eps"] == "e"
        assert report["summary"] == "[e simbólico] 1 cruce(s) de pared en el segmento"

    def test_run_error(self, tmp_path):
        """Test: un error de cálculo da código 2 y un resumen de error"""
        path = tmp_path / "r.json"
        code = run(RunConfig(subcommand="mixedsub", d=3, m=2, output=str(path)))
        assert code == EXIT_INPUT_ERROR
        report = json.loads(path.read_text(encoding="utf-8"))
        assert report["summary"].startswith("[e simbólico] error WRONG_DIMENSION")

    def test_run_unwritable_output(self, tmp_path, capsys):
        """Test: un --output no escribible da código 2 y un mensaje en stderr"""
        path = tmp_path / "no_existe" / "r.json"
        code = run(RunConfig(subcommand="walls", d=2, n=6, output=str(path)))
        assert code == EXIT_INPUT_ERROR
        assert not path.exists()
        assert "❌ Error: No se pudo escribir" in capsys.readouterr().err


REPORT_CONFIGS = [
    RunConfig(subcommand="walls", d=2, n=6),
    RunConfig(subcommand="segment", d=2, n=6, eps=Fraction(1, 100)),
    RunConfig(subcommand="chamber", d=1, n=6, b="t", b2=SAMPLE_WEIGHTS_FILE),
    RunConfig(subcommand="stability", weights="nt", source="e_config", d=2, n=6),
    RunConfig(subcommand="ample", d=2, n=6),
    RunConfig(subcommand="ample", model="pairing", surface=SAMPLE_SURFACE_FILE),
    RunConfig(subcommand="replace", family=SAMPLE_FAMILY_FILE),
    RunConfig(subcommand="mixedsub", lifting=SAMPLE_LIFTING_FILE),
    RunConfig(subcommand="mixedsub", d=2, m=3, seed=4),
    RunConfig(subcommand="verify-paper"),
]


class TestReportSerialization:
    """El reporte JSON se relee sin pérdida"""

    @pytest.mark.parametrize("config", REPORT_CONFIGS, ids=lambda c: c.subcommand)
    def test_dump_and_reload(self, config):
        """Test: releer el texto y volver a serializarlo da el mismo texto"""
        report = build_report(config, dispatch(config))
        text = dump_json(report)
        reloaded = json.loads(text)
        assert dump_json(reloaded) == text
        assert json.loads(dump_json(reloaded)) == reloaded
        assert reloaded["result"]["success"] == report["result"]["success"]

    @pytest.mark.parametrize("config", REPORT_CONFIGS, ids=lambda c: c.subcommand)
    def test_written_file_reloads(self, config, tmp_path):
        """Test: el archivo escrito por run se relee y se vuelve a serializar igual"""
        path = tmp_path / "report.json"
        run(replace(config, output=str(path)))
        text = path.read_text(encoding="utf-8")
        report = json.loads(text)
        assert dump_json(report) + "\n" == text
        assert report["result"] == json.loads(dump_json(dispatch(config)))


class TestMain:
    """Interfaz de línea de comandos"""

    def test_stdout_report(self, capsys):
        """Test: el reporte va a stdout"""
        code = main(["--eps", "1/100", "segment", "--d", "2", "--n", "6"])
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["eps"] == "1/100"
        assert report["result"]["data"]["crossings"][0]["u0"] == "97/98"

    def test_bad_eps(self):
        """Test: e fuera de (0, 1)"""
        assert main(["--eps", "2", "walls", "--d", "1", "--n", "5"]) == EXIT_INPUT_ERROR

    def test_unparseable_eps(self):
        """Test: argparse rechaza e no racional"""
        with pytest.raises(SystemExit):
            main(["--eps", "0.5", "walls", "--d", "1", "--n", "5"])

    def test_requires_subcommand(self):
        """Test: sin subcomando"""
        with pytest.raises(SystemExit):
            main([])

    def test_unwritable_output(self, tmp_path, capsys):
        """Test: --output en un directorio inexistente sale con código 2 sin traza"""
        path = tmp_path / "falta" / "r.json"
        code = main(["--output", str(path), "walls", "--d", "1", "--n", "5"])
        assert code == EXIT_INPUT_ERROR
        err = capsys.readouterr().err
        assert "❌ Error" in err
        assert "Traceback" not in err
