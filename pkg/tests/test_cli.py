import json

import pytest

from shopminer.cli.config import PipelineConfig, load_config, save_config
from shopminer.cli.main import main
from shopminer.errors import DataError
from tests.conftest import FORUM_STORE


def fixture_config(tmp_path, **overrides):
    config = {
        "seed": 777,
        "harvest": {
            "forums": [{"name": "fixtureforum", "seed_url": "http://forum.test/board/1"}],
            "fixture_dir": str(FORUM_STORE),
            "max_pages": 50,
            "max_depth": 4,
        },
        "corpus": {"min_df": 2, "max_df_ratio": 0.9},
        "lda": {"k": 3, "iterations": 300},
        "coherence": {"k_values": [2, 3, 4], "top_n": 5},
        "termrank": {"key_terms": 8},
        "output": {"dir": str(tmp_path / "out")},
    }
    config.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return path


class TestConfig:
    def test_round_trip_lossless(self, tmp_path):
        config = PipelineConfig()
        config.seed = 42
        config.coherence.k_values = [5, 10]
        path = tmp_path / "c.json"
        save_config(config, path)
        assert load_config(path) == config

    def test_defaults(self):
        config = PipelineConfig()
        assert config.lda.iterations == 1000
        assert config.lda.beta == 0.01
        assert config.lda.alpha is None  # 5/k rule
        assert config.coherence.k_values == [5, 10, 15, 20, 25, 30, 35, 40, 45, 50]
        assert config.coherence.window_width == 110
        assert config.coherence.top_n == 20
        assert config.termrank.relevance_lambda == 0.6
        assert config.termrank.augment_terms == ["db"]
        assert config.stats.bin_edges == [0.0, 1.0, 5.0, 10.0, 50.0, 100.0, 500.0]
        assert config.stats.flag_price_threshold == 500.0

    def test_unknown_key_rejected(self):
        with pytest.raises(DataError, match="unknown"):
            PipelineConfig.from_dict({"lda": {"topics": 20}})

    def test_missing_config_file_is_data_error(self, tmp_path):
        with pytest.raises(DataError):
            load_config(tmp_path / "absent.json")

    def test_delay_defaults_by_mode(self):
        assert PipelineConfig().harvest.effective_delay_ms() == 0
        live = PipelineConfig()
        live.harvest.live = True
        assert live.harvest.effective_delay_ms() == 1000


class TestCliPipeline:
    def test_full_pipeline_on_fixture(self, tmp_path):
        config_path = fixture_config(tmp_path)
        out = tmp_path / "out"

        assert main(["--config", str(config_path), "harvest"]) == 0
        dataset = out / "dataset.ndjson"
        assert dataset.exists()
        summary = (out / "harvest_summary.tsv").read_text()
        assert "fixtureforum - usernames\t8\t4" in summary
        assert "fixtureforum - signatures\t4\t4" in summary
        assert "total (unique)\t10\t6" in summary

        assert main(["--config", str(config_path), "train"]) == 0
        assert (out / "model.npz").exists()
        assert (out / "phi.tsv").exists()
        assert (out / "theta.json").exists()

        assert main(["--config", str(config_path), "sweep"]) == 0
        coherence = (out / "coherence.tsv").read_text().strip().split("\n")
        assert coherence[0] == "k\tc_v"
        assert len(coherence) == 4  # header + 3 swept values
        full = json.loads((out / "coherence_full.json").read_text())
        assert set(full["scores"]) == {"2", "3", "4"}
        assert (out / "model_best.npz").exists()

        assert main(["--config", str(config_path), "report"]) == 0
        for name in (
            "topic_table", "sample_products", "category_counts", "price_cdf",
            "items_per_shop_cdf", "lognormal_fit", "price_summary", "price_bins",
            "flagged_products",
        ):
            assert (out / f"{name}.tsv").exists(), name
            payload = json.loads((out / f"{name}.json").read_text())
            assert payload["schema"].startswith("shopminer.")
            assert set(payload) == {"schema", "columns", "rows"}

        counts = json.loads((out / "category_counts.json").read_text())
        assert dict((r[0], r[1]) for r in counts["rows"]) == {
            "account": 16, "service": 10, "file": 10, "total": 36,
        }
        flags = json.loads((out / "flagged_products.json").read_text())
        assert {r[1] for r in flags["rows"]} == {
            "Terms of Service. READ BEFORE BUYING",
            "Join our Discord Server | Support",
            "Contact me on Telegram for Support",
        }

        assert main(["--config", str(config_path), "query", "--topic", "0"]) == 0
        assert (out / "query_topic0.tsv").exists()
        manifest = json.loads((out / "manifest_query.json").read_text())
        assert manifest["extra"]["augment"] == ["db"]
        assert len(manifest["extra"]["terms"]) == 3

    def test_harvest_reruns_byte_identical(self, tmp_path):
        config_path = fixture_config(tmp_path)
        out = tmp_path / "out"
        assert main(["--config", str(config_path), "harvest"]) == 0
        first = (out / "dataset.ndjson").read_bytes()
        first_summary = (out / "harvest_summary.tsv").read_bytes()
        assert main(["--config", str(config_path), "harvest"]) == 0
        assert (out / "dataset.ndjson").read_bytes() == first
        assert (out / "harvest_summary.tsv").read_bytes() == first_summary

    def test_train_determinism_matches_sweep_seed_derivation(self, tmp_path):
        # train --k equals the sweep's model for that k: same derived seed
        config_path = fixture_config(tmp_path)
        out = tmp_path / "out"
        main(["--config", str(config_path), "harvest"])
        main(["--config", str(config_path), "sweep"])
        best_k = json.loads((out / "coherence_full.json").read_text())["best_k"]
        main(["--config", str(config_path), "train", "--k", str(best_k)])
        import numpy as np

        with np.load(out / "model.npz") as a, np.load(out / "model_best.npz") as b:
            assert np.array_equal(a["z"], b["z"])

    def test_report_on_empty_dataset_exits_3(self, tmp_path):
        config_path = fixture_config(tmp_path)
        out = tmp_path / "out"
        out.mkdir()
        (out / "dataset.ndjson").write_text("")
        assert main(["--config", str(config_path), "report"]) == 3

    def test_missing_dataset_exits_3(self, tmp_path):
        config_path = fixture_config(tmp_path)
        assert main(["--config", str(config_path), "train"]) == 3

    def test_missing_config_exits_3(self, tmp_path):
        assert main(["--config", str(tmp_path / "none.json"), "harvest"]) == 3

    def test_usage_error_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["no-such-command"])
        assert err.value.code == 2

    def test_seed_override_changes_models(self, tmp_path):
        config_path = fixture_config(tmp_path)
        out = tmp_path / "out"
        main(["--config", str(config_path), "harvest"])
        main(["--config", str(config_path), "train"])
        import numpy as np

        with np.load(out / "model.npz") as data:
            z_default = data["z"].copy()
        main(["--config", str(config_path), "--seed", "31337", "train"])
        with np.load(out / "model.npz") as data:
            assert not np.array_equal(z_default, data["z"])

    def test_fixture_dir_env_override(self, tmp_path, monkeypatch):
        # config points at a bogus dir; the env var must win
        config_path = fixture_config(
            tmp_path,
            harvest={
                "forums": [{"name": "fixtureforum", "seed_url": "http://forum.test/board/1"}],
                "fixture_dir": str(tmp_path / "does-not-exist"),
                "max_pages": 50,
                "max_depth": 4,
            },
        )
        monkeypatch.setenv("SHOPMINER_FIXTURE_DIR", str(FORUM_STORE))
        assert main(["--config", str(config_path), "harvest"]) == 0

    def test_out_flag_overrides_config(self, tmp_path):
        config_path = fixture_config(tmp_path)
        alt = tmp_path / "alt"
        assert main(["--config", str(config_path), "--out", str(alt), "harvest"]) == 0
        assert (alt / "dataset.ndjson").exists()

    def test_manifest_records_hashes_and_seed(self, tmp_path):
        config_path = fixture_config(tmp_path)
        out = tmp_path / "out"
        main(["--config", str(config_path), "harvest"])
        manifest = json.loads((out / "manifest_harvest.json").read_text())
        assert manifest["schema"] == "shopminer.manifest.v1"
        assert manifest["master_seed"] == 777
        assert len(manifest["config_sha256"]) == 64
        assert manifest["kernel_backend"] in ("cython", "python")
