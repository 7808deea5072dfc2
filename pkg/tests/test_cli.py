import pytest

from fontocr import load_image, load_template_set, save_image
from fontocr.cli import main

from pages import paste_page


@pytest.fixture(scope="session")
def template_file(template_set, tmp_path_factory, glyph_dir, manifest_path):
    path = tmp_path_factory.mktemp("cli") / "default.ftset"
    code = main(
        ["build-templates", "--glyphs", str(glyph_dir), "--manifest", str(manifest_path), "--out", str(path)]
    )
    assert code == 0
    return path


@pytest.fixture(scope="session")
def arial_page(template_set, tmp_path_factory):
    path = tmp_path_factory.mktemp("cli-pages") / "arial.pgm"
    save_image(paste_page(template_set, "Arial", ["HELLO", "WORLD"]), path)
    return path


class TestBuildTemplates:
    def test_build_prints_count(self, glyph_dir, manifest_path, tmp_path, capsys):
        out = tmp_path / "set.ftset"
        code = main(
            ["build-templates", "--glyphs", str(glyph_dir), "--manifest", str(manifest_path), "--out", str(out)]
        )
        assert code == 0
        assert "108 glyphs" in capsys.readouterr().out
        assert len(load_template_set(out)) == 108

    def test_missing_glyph_exits_4_and_names_pair(self, glyph_dir, manifest_path, tmp_path, capsys):
        pruned = tmp_path / "pruned.tsv"
        lines = manifest_path.read_text().splitlines()
        pruned.write_text(
            "\n".join(l for l in lines if not l.startswith("ComicSansMS\tQ\t")) + "\n"
        )
        out = tmp_path / "set.ftset"
        code = main(["build-templates", "--glyphs", str(glyph_dir), "--manifest", str(pruned), "--out", str(out)])
        assert code == 4
        assert "ComicSansMS/Q" in capsys.readouterr().err
        assert not out.exists()

    def test_bad_path_exits_3(self, tmp_path):
        code = main(
            ["build-templates", "--glyphs", str(tmp_path), "--manifest", str(tmp_path / "nope.tsv"),
             "--out", str(tmp_path / "set.ftset")]
        )
        assert code == 3
        assert not (tmp_path / "set.ftset").exists()

    def test_missing_required_flag_exits_2(self):
        assert main(["build-templates", "--out", "x.ftset"]) == 2


class TestInspectTemplates:
    def test_inspect_prints_header(self, template_file, capsys):
        assert main(["inspect-templates", str(template_file)]) == 0
        out = capsys.readouterr().out
        assert "Arial, ComicSansMS, TimesNewRoman" in out
        assert "108" in out


class TestRecognize:
    def test_recognizes_page_and_writes_default_report(self, template_file, arial_page, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code = main(["recognize", str(arial_page), "--templates", str(template_file)])
        assert code == 0
        assert capsys.readouterr().out.strip() == "Arial"
        report = tmp_path / "DSP.txt"
        assert report.read_text() == "The font is Arial and the text is:\nHELLO\nWORLD\n"

    def test_structured_output(self, template_file, arial_page, tmp_path):
        report = tmp_path / "out.txt"
        structured = tmp_path / "out.json"
        code = main(
            ["recognize", str(arial_page), "--templates", str(template_file),
             "--report", str(report), "--structured", str(structured)]
        )
        assert code == 0
        from fontocr import read_structured

        assert read_structured(structured).font == "Arial"

    def test_unreadable_image_exits_3(self, template_file, tmp_path):
        report = tmp_path / "report.txt"
        code = main(
            ["recognize", str(tmp_path / "nope.pgm"), "--templates", str(template_file),
             "--report", str(report)]
        )
        assert code == 3
        assert not report.exists()

    def test_out_of_range_threshold_exits_2(self, template_file, arial_page, tmp_path):
        report = tmp_path / "report.txt"
        code = main(
            ["recognize", str(arial_page), "--templates", str(template_file),
             "--report", str(report), "--threshold", "1.5"]
        )
        assert code == 2
        assert not report.exists()

    def test_corrupt_template_file_exits_4(self, arial_page, tmp_path):
        bad = tmp_path / "bad.ftset"
        bad.write_bytes(b"not a template set")
        code = main(["recognize", str(arial_page), "--templates", str(bad)])
        assert code == 4

    def test_reports_are_byte_identical_across_runs(self, template_file, arial_page, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        assert main(["recognize", str(arial_page), "--templates", str(template_file), "--report", str(a)]) == 0
        assert main(["recognize", str(arial_page), "--templates", str(template_file), "--report", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestNoise:
    def test_zero_density_is_identity(self, arial_page, tmp_path):
        out = tmp_path / "noisy.pgm"
        code = main(["noise", str(arial_page), "--out", str(out), "--density", "0"])
        assert code == 0
        assert load_image(out) == load_image(arial_page)

    def test_seeded_noise_is_deterministic(self, arial_page, tmp_path):
        a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
        for out in (a, b):
            assert main(["noise", str(arial_page), "--out", str(out), "--seed", "9"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_kind_exits_2(self, arial_page, tmp_path):
        assert main(["noise", str(arial_page), "--out", str(tmp_path / "x.pgm"), "--kind", "perlin"]) == 2


class TestEvaluate:
    def test_default_grid_has_nine_rows(self, template_file, tmp_path):
        out = tmp_path / "table.csv"
        code = main(
            ["evaluate", "--templates", str(template_file), "--out", str(out),
             "--chars", "20", "--density", "0.02"]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 10  # header + 3 fonts x 3 sizes
        assert lines[0].startswith("font,size,total")

    def test_identical_seeds_give_identical_csv(self, template_file, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["--templates", str(template_file), "--chars", "15", "--scales", "1.0",
                "--fonts", "Arial", "--corpus-seed", "3", "--noise-seed", "4"]
        assert main(["evaluate", *args, "--out", str(a)]) == 0
        assert main(["evaluate", *args, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_scale_exits_2(self, template_file, tmp_path):
        code = main(
            ["evaluate", "--templates", str(template_file), "--out", str(tmp_path / "x.csv"),
             "--scales", "0.5,3.0"]
        )
        assert code == 2
        assert not (tmp_path / "x.csv").exists()


class TestConfig:
    def test_config_supplies_defaults(self, template_file, arial_page, tmp_path, capsys):
        report = tmp_path / "from-config.txt"
        config = tmp_path / "run.cfg"
        config.write_text(f"templates={template_file}\nreport={report}\n")
        code = main(["--config", str(config), "recognize", str(arial_page)])
        assert code == 0
        assert report.exists()

    def test_cli_flag_beats_config(self, template_file, arial_page, tmp_path):
        config = tmp_path / "run.cfg"
        cfg_report = tmp_path / "config.txt"
        cli_report = tmp_path / "cli.txt"
        config.write_text(f"templates={template_file}\nreport={cfg_report}\n")
        code = main(["--config", str(config), "recognize", str(arial_page), "--report", str(cli_report)])
        assert code == 0
        assert cli_report.exists() and not cfg_report.exists()

    def test_unknown_config_key_exits_2(self, arial_page, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("does_not_exist=1\n")
        assert main(["--config", str(config), "recognize", str(arial_page)]) == 2

    def test_config_values_are_type_checked(self, template_file, arial_page, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("threshold=2.5\n")
        code = main(
            ["--config", str(config), "recognize", str(arial_page), "--templates", str(template_file)]
        )
        assert code == 2


class TestHelp:
    def test_help_lists_defaults(self, capsys):
        assert main(["recognize", "--help"]) == 0
        out = " ".join(capsys.readouterr().out.split())
        assert "default: 0.4" in out
        assert "default: DSP.txt" in out
        assert "default: 25" in out

    def test_evaluate_help_lists_defaults(self, capsys):
        assert main(["evaluate", "--help"]) == 0
        out = " ".join(capsys.readouterr().out.split())
        assert "default: 0.05" in out
        assert "(0.6, 0.8, 1.0)" in out
