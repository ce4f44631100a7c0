import itertools
import json

import numpy as np
import pytest

from rmworkbench import cli, rm_core
from rmworkbench.channel_model import ChannelConfig, frame_rng, llr, transmit
from rmworkbench.harness import (CSV_HEADER, FerRecord, SimJob, emit,
                                 job_from_dict, ml_lower_bound, parse_csv,
                                 records_to_csv, records_to_json, run_job)
from rmworkbench.rm_core import ConfigurationError
from rmworkbench.top_decoders import DecoderConfig, correlation, sc_decode


def _job(**kw):
    base = dict(r=1, m=3,
                decoder=DecoderConfig(algorithm="SC"),
                ebn0_points=(4.0,), max_frames=200, min_frame_errors=1000,
                seed=11, workers=1)
    base.update(kw)
    return SimJob(**base)


def test_job_validation():
    with pytest.raises(ConfigurationError):
        _job(ebn0_points=())
    with pytest.raises(ConfigurationError):
        _job(ebn0_points=(2.0, 1.0))
    with pytest.raises(ConfigurationError):
        _job(max_frames=0)
    with pytest.raises(ConfigurationError):
        _job(r=0)  # invalid code surfaces before simulation
    with pytest.raises(ConfigurationError):
        _job(r=1, m=2, decoder=DecoderConfig(algorithm="SRPA"))


def test_zero_noise_gives_zero_fer():
    for algo in ("SC", "FHT-FSCL", "p-FHT-FSCL", "RPA"):
        job = _job(r=2, m=4, decoder=DecoderConfig(algorithm=algo, L=2),
                   zero_noise=True, max_frames=100)
        rec = run_job(job)[0]
        assert rec.frames == 100
        assert rec.frame_errors == 0
        assert rec.fer == 0.0


def test_worker_counts_agree_bytewise():
    job1 = _job(m=3, max_frames=600, workers=1, ebn0_points=(2.0, 4.0))
    job2 = _job(m=3, max_frames=600, workers=3, ebn0_points=(2.0, 4.0))
    rec1, rec2 = run_job(job1), run_job(job2)
    strip = lambda recs: records_to_csv(
        [FerRecord(**{**r.__dict__, "wall_seconds": 0.0}) for r in recs])
    assert strip(rec1) == strip(rec2)


def test_stopping_rule_on_min_errors():
    job = _job(ebn0_points=(0.0,), max_frames=5000, min_frame_errors=5)
    rec = run_job(job)[0]
    assert rec.frame_errors >= 5
    assert rec.frames <= 5000
    assert rec.fer == rec.frame_errors / rec.frames


def test_ml_lower_bound_rules():
    alpha = np.array([2.0, 1.0, 0.5, 1.5])
    x = np.array([0, 1, 0, 0], dtype=np.uint8)  # disagrees with one sign
    assert not ml_lower_bound(alpha, x, x.copy())
    worse = np.array([1, 1, 0, 0], dtype=np.uint8)  # lower correlation
    assert correlation(worse, alpha) < correlation(x, alpha)
    assert not ml_lower_bound(alpha, x, worse)
    better = np.array([0, 0, 0, 0], dtype=np.uint8)
    assert correlation(better, alpha) > correlation(x, alpha)
    assert ml_lower_bound(alpha, x, better)


def test_exact_ml_decoder_has_equal_bound():
    # the transform decoder is maximum likelihood on order-1 codes, so
    # every error it makes is ML-attributable
    job = _job(r=1, m=4, decoder=DecoderConfig(algorithm="FHT-FSC"),
               ebn0_points=(1.0,), max_frames=2000)
    rec = run_job(job)[0]
    assert rec.frame_errors > 0
    assert rec.ml_lb_fer == rec.fer


def test_sc_paired_against_exhaustive_ml():
    spec = rm_core.build_code(1, 3)
    msgs = np.array(list(itertools.product([0, 1], repeat=spec.K)), dtype=np.uint8)
    U = np.zeros((len(msgs), spec.N), dtype=np.uint8)
    U[:, list(spec.info_set)] = msgs
    book = rm_core.polar_transform(U)
    bipolar = (1.0 - 2.0 * book).astype(np.float64)
    chan = ChannelConfig.for_rate(6.0, spec.rate, 13)
    n = 10_000
    sc_err = ml_err = both = 0
    for k in range(n):
        rng = frame_rng(13, 0, k)
        x = rm_core.polar_transform(rm_core.random_message(spec, rng))
        alpha = llr(transmit(x, chan, rng), chan)
        sc_bad = not np.array_equal(sc_decode(spec, alpha).codeword, x)
        ml_bad = not np.array_equal(book[np.argmax(bipolar @ alpha)], x)
        sc_err += sc_bad
        ml_err += ml_bad
        both += sc_bad and ml_bad
    assert ml_err <= sc_err          # paired streams: ML never does worse
    gap = (sc_err - ml_err) / n      # the measured SC-vs-ML gap
    sigma = np.sqrt(max(sc_err, 1)) / n
    assert sc_err / n <= ml_err / n + gap + 3 * sigma


def _sample_records():
    return [FerRecord(r=2, m=6, decoder="p-FHT-FSCL", L=4, M=1, P=1,
                      ebn0_db=2.5, frames=1000, frame_errors=17, fer=0.017,
                      ml_lb_fer=0.012, avg_additions=1234.5,
                      avg_comparisons=678.0, time_steps=61, mem_bits=11008,
                      wall_seconds=0.25, seed=42)]


def test_csv_header_and_round_trip(tmp_path):
    recs = _sample_records()
    text = records_to_csv(recs)
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    parsed = parse_csv(text)
    assert parsed == recs
    out = tmp_path / "r.csv"
    emit(recs, str(out), "csv")
    assert parse_csv(out.read_text()) == recs


def test_empty_records_header_only():
    assert records_to_csv([]).strip() == ",".join(CSV_HEADER)


def test_json_and_csv_agree(tmp_path):
    recs = _sample_records()
    data = json.loads(records_to_json(recs))
    assert len(data) == 1
    row = parse_csv(records_to_csv(recs))[0]
    for key, value in data[0].items():
        assert getattr(row, key) == value
    with pytest.raises(ConfigurationError):
        emit(recs, str(tmp_path / "x"), "yaml")


def test_job_from_dict_round_trip():
    cfg = {"code": [2, 6],
           "decoder": {"algorithm": "p-FHT-FSCL", "L": 4, "M": 2},
           "ebn0_points": [2.0, 2.5], "max_frames": 50,
           "min_frame_errors": 10, "seed": 3, "workers": 2}
    job = job_from_dict(cfg)
    assert job.decoder.algorithm == "p-FHT-FSCL"
    assert job.ebn0_points == (2.0, 2.5)
    assert job.workers == 2


def test_cli_decode_and_complexity(tmp_path, capsys):
    spec = rm_core.build_code(2, 4)
    x = rm_core.polar_transform(rm_core.random_message(spec, np.random.default_rng(1)))
    alpha = (1.0 - 2.0 * x) * 4.0
    llr_file = tmp_path / "llr.txt"
    llr_file.write_text(" ".join(repr(float(v)) for v in alpha))
    rc = cli.main(["decode", "--code", "2,4", "--decoder", "p-FHT-FSCL",
                   "--L", "2", "--llr-in", str(llr_file), "--seed", "9"])
    out = capsys.readouterr().out.splitlines()
    assert rc == 0
    assert out[0] == "".join(str(int(b)) for b in x)
    assert out[1] == "pm=0.0"

    rc = cli.main(["complexity", "--code", "2,9", "--decoder", "p-FHT-FSCL",
                   "--L", "4"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "memory_kb=10.53" in out


def test_cli_simulate_and_tables(tmp_path, capsys):
    cfg = {"code": [1, 3], "decoder": {"algorithm": "SC"},
           "ebn0_points": [3.0], "max_frames": 50, "min_frame_errors": 50,
           "seed": 1}
    cfg_path = tmp_path / "job.json"
    cfg_path.write_text(json.dumps(cfg))
    out_path = tmp_path / "out.csv"
    rc = cli.main(["simulate", "--config", str(cfg_path),
                   "--out", str(out_path), "--format", "csv"])
    assert rc == 0
    recs = parse_csv(out_path.read_text())
    assert recs[0].frames == 50

    rc = cli.main(["tables", "--paper"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "10.53" in out
    assert "3592" in out and "10250" in out


def test_cli_error_is_single_line(tmp_path, capsys):
    rc = cli.main(["decode", "--code", "0,3", "--decoder", "SC",
                   "--llr-in", "nope.txt"])
    err = capsys.readouterr().err
    assert rc != 0
    assert err.startswith("error:")
    assert len(err.strip().splitlines()) == 1
