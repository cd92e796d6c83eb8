import json

import pytest

from setvec.cli import main


def write_lines(path, *lines):
    path.write_text("".join(line + "\n" for line in lines))


@pytest.fixture
def birds_files(tmp_path):
    vectors = tmp_path / "atomic.jsonl"
    write_lines(
        vectors,
        json.dumps({"id": "qA", "vector": {"birds": 1.0, "fly": 1.0, "colombia": 1.0, "andes": 1.0}}),
        json.dumps({"id": "qB", "vector": {"birds": 1.0, "fly": 1.0, "venezuela": 1.0, "andes": 1.0}}),
    )
    queries = tmp_path / "queries.jsonl"
    write_lines(
        queries,
        json.dumps({"qid": "q1", "operator": "difference", "method": "subtract",
                    "a_ref": "qA", "b_ref": "qB"}),
    )
    return vectors, queries


class TestCompose:
    def test_disentangled_override(self, tmp_path, birds_files):
        vectors, queries = birds_files
        out = tmp_path / "composed.jsonl"
        code = main([
            "compose", "--queries", str(queries), "--vectors", str(vectors),
            "--method", "disentangled", "--out", str(out),
        ])
        assert code == 0
        record = json.loads(out.read_text())
        assert record["id"] == "q1"
        assert record["vector"] == {
            "birds": 1.0, "fly": 1.0, "colombia": 1.0, "andes": 1.0, "venezuela": -1.0
        }

    def test_record_method_used_without_override(self, tmp_path, birds_files):
        vectors, queries = birds_files
        out = tmp_path / "composed.jsonl"
        assert main([
            "compose", "--queries", str(queries), "--vectors", str(vectors),
            "--out", str(out),
        ]) == 0
        record = json.loads(out.read_text())
        assert record["vector"] == {"colombia": 1.0, "venezuela": -1.0}

    def test_cpt_writes_pair_keys(self, tmp_path, birds_files):
        vectors, _ = birds_files
        queries = tmp_path / "iq.jsonl"
        write_lines(
            queries,
            json.dumps({"qid": "i1", "operator": "intersection", "method": "cpt",
                        "a_ref": "qA", "b_ref": "qB", "params": {"m": 2}}),
        )
        out = tmp_path / "composed.jsonl"
        assert main([
            "compose", "--queries", str(queries), "--vectors", str(vectors),
            "--out", str(out),
        ]) == 0
        record = json.loads(out.read_text())
        assert all("∩" in key for key in record["vector"])


@pytest.fixture
def indexed_corpus(tmp_path):
    docs = tmp_path / "docs.jsonl"
    write_lines(
        docs,
        json.dumps({"id": "d1", "vector": {"colombia": 1.0}}),
        json.dumps({"id": "d2", "vector": {"colombia": 1.0, "venezuela": 1.0}}),
        json.dumps({"id": "d3", "vector": {"venezuela": 1.0}}),
    )
    index = tmp_path / "corpus.svix"
    assert main(["index", "--vectors", str(docs), "--out", str(index)]) == 0
    return index


class TestSearch:
    def test_signed_query_run(self, tmp_path, indexed_corpus):
        queries = tmp_path / "q.jsonl"
        write_lines(
            queries,
            json.dumps({"id": "q1", "vector": {"colombia": 1.0, "venezuela": -1.0}}),
        )
        run = tmp_path / "run.trec"
        assert main([
            "search", "--index", str(indexed_corpus), "--queries", str(queries),
            "--k", "10", "--out", str(run),
        ]) == 0
        assert run.read_text() == (
            "q1 Q0 d1 1 1.000000 setvec\n"
            "q1 Q0 d2 2 0.000000 setvec\n"
            "q1 Q0 d3 3 -1.000000 setvec\n"
        )

    def test_query_records_compose_then_search(self, tmp_path, indexed_corpus):
        queries = tmp_path / "q.jsonl"
        write_lines(
            queries,
            json.dumps({"qid": "q1", "operator": "difference", "method": "subtract",
                        "a": {"colombia": 1.0}, "b": {"venezuela": 1.0}}),
        )
        run = tmp_path / "run.trec"
        assert main([
            "search", "--index", str(indexed_corpus), "--queries", str(queries),
            "--k", "10", "--out", str(run),
        ]) == 0
        lines = run.read_text().splitlines()
        assert lines[0].startswith("q1 Q0 d1 1 1.000000")

    def test_cpt_query_records(self, tmp_path, indexed_corpus):
        queries = tmp_path / "q.jsonl"
        write_lines(
            queries,
            json.dumps({"qid": "i1", "operator": "intersection", "method": "cpt",
                        "a": {"colombia": 1.0}, "b": {"venezuela": 1.0}}),
        )
        run = tmp_path / "run.trec"
        assert main([
            "search", "--index", str(indexed_corpus), "--queries", str(queries),
            "--k", "10", "--candidate-pool", "10", "--out", str(run),
        ]) == 0
        lines = run.read_text().splitlines()
        assert lines[0].startswith("i1 Q0 d2 1 1.000000")
        assert len(lines) == 3  # one-sided docs kept, scored 0

    def test_threads_do_not_change_output(self, tmp_path, indexed_corpus):
        queries = tmp_path / "q.jsonl"
        write_lines(
            queries,
            *[
                json.dumps({"id": f"q{i}", "vector": {"colombia": 1.0 + i, "venezuela": -0.5 * i}})
                for i in range(8)
            ],
        )
        run1 = tmp_path / "run1.trec"
        run4 = tmp_path / "run4.trec"
        base = ["search", "--index", str(indexed_corpus), "--queries", str(queries), "--k", "3"]
        assert main(base + ["--threads", "1", "--out", str(run1)]) == 0
        assert main(base + ["--threads", "4", "--out", str(run4)]) == 0
        assert run1.read_bytes() == run4.read_bytes()


class TestEncode:
    def test_tf_and_bm25(self, tmp_path):
        docs = tmp_path / "docs.jsonl"
        write_lines(
            docs,
            json.dumps({"id": "d1", "text": "Birds of Colombia"}),
            json.dumps({"id": "d2", "text": "Birds of Venezuela, birds that fly"}),
        )
        tf_out = tmp_path / "tf.jsonl"
        assert main(["encode", "--docs", str(docs), "--tf", "--out", str(tf_out)]) == 0
        records = [json.loads(line) for line in tf_out.read_text().splitlines()]
        assert records[1]["vector"]["birds"] == 2.0

        bm25_out = tmp_path / "bm25.jsonl"
        assert main(["encode", "--docs", str(docs), "--bm25", "--out", str(bm25_out)]) == 0
        records = [json.loads(line) for line in bm25_out.read_text().splitlines()]
        # 'colombia' appears in 1 of 2 docs; 'birds' in both, so idf is lower.
        assert records[0]["vector"]["colombia"] > records[0]["vector"]["birds"]

    def test_logit_grid_activation(self, tmp_path):
        grid = tmp_path / "query1.tsv"
        grid.write_text("monarch\teuropean\n2.0\t-3.0\n0.5\t-2.0\n")
        out = tmp_path / "vec.jsonl"
        assert main([
            "encode", "--logits", str(grid), "--aggregation", "sum",
            "--epsilon", "0.25", "--out", str(out),
        ]) == 0
        record = json.loads(out.read_text())
        assert record["id"] == "query1"
        assert record["vector"]["monarch"] > 0
        assert record["vector"]["european"] < 0

        positive_only = tmp_path / "pos.jsonl"
        assert main([
            "encode", "--logits", str(grid), "--out", str(positive_only),
        ]) == 0
        assert "european" not in json.loads(positive_only.read_text())["vector"]

    def test_tf_without_docs_is_usage_error(self, tmp_path):
        assert main(["encode", "--tf", "--out", str(tmp_path / "o.jsonl")]) == 1

    def test_stopwords(self, tmp_path):
        docs = tmp_path / "docs.jsonl"
        write_lines(docs, json.dumps({"id": "d1", "text": "birds of colombia"}))
        stop = tmp_path / "stop.txt"
        stop.write_text("of\n")
        out = tmp_path / "tf.jsonl"
        assert main([
            "encode", "--docs", str(docs), "--tf", "--stopwords", str(stop),
            "--out", str(out),
        ]) == 0
        record = json.loads(out.read_text())
        assert "of" not in record["vector"]


class TestFuseEvalPairwise:
    def test_fuse(self, tmp_path):
        run_a = tmp_path / "a.trec"
        run_b = tmp_path / "b.trec"
        write_lines(run_a, "q1 Q0 d1 1 2.000000 t", "q1 Q0 d2 2 1.000000 t")
        write_lines(run_b, "q1 Q0 d2 1 3.000000 t", "q1 Q0 d1 2 1.000000 t")
        out = tmp_path / "fused.trec"
        assert main([
            "fuse", "--run-a", str(run_a), "--run-b", str(run_b),
            "--op", "minus", "--out", str(out),
        ]) == 0
        assert out.read_text() == "q1 Q0 d1 1 1.000000 setvec\nq1 Q0 d2 2 -2.000000 setvec\n"

    def test_eval_report(self, tmp_path, capsys):
        run = tmp_path / "run.trec"
        write_lines(
            run,
            "q1 Q0 d1 1 3.000000 t",
            "q1 Q0 d3 2 2.000000 t",
            "q1 Q0 d2 3 1.000000 t",
        )
        qrels = tmp_path / "q.qrels"
        write_lines(qrels, "q1 0 d1 1", "q1 0 d2 1")
        report = tmp_path / "report.json"
        per_query = tmp_path / "per_query.tsv"
        assert main([
            "eval", "--run", str(run), "--qrels", str(qrels),
            "--metrics", "ndcg@3,recall@2",
            "--out", str(report), "--per-query", str(per_query),
        ]) == 0
        payload = json.loads(report.read_text())
        assert payload["metrics"]["ndcg@3"] == pytest.approx(0.9197, abs=1e-4)
        assert payload["metrics"]["recall@2"] == 0.5
        assert "q1\tndcg@3" in per_query.read_text()
        assert "ndcg@3" in capsys.readouterr().out

    def test_pairwise(self, tmp_path, capsys):
        pairs = tmp_path / "pairs.jsonl"
        write_lines(
            pairs,
            json.dumps({"qid_a": "qa", "qid_b": "qb", "doc_a": "da", "doc_b": "db"}),
        )
        scores = tmp_path / "scores.trec"
        write_lines(
            scores,
            "qa Q0 da 1 2.000000 t", "qa Q0 db 2 1.000000 t",
            "qb Q0 db 1 2.000000 t", "qb Q0 da 2 1.000000 t",
        )
        assert main(["pairwise", "--pairs", str(pairs), "--scores", str(scores)]) == 0
        assert "1.0000" in capsys.readouterr().out

    def test_analyze_interference(self, tmp_path, capsys):
        queries = tmp_path / "q.jsonl"
        write_lines(
            queries,
            json.dumps({"qid": "q1", "operator": "difference", "method": "subtract",
                        "a": {"x": 1.0}, "b": {"y": 1.0}}),
            json.dumps({"qid": "q2", "operator": "difference", "method": "subtract",
                        "a": {"x": 1.0}, "b": {"x": 1.0}}),
        )
        metrics = tmp_path / "m.tsv"
        write_lines(metrics, "q1\t0.8", "q2\t0.2")
        assert main([
            "analyze-interference", "--queries", str(queries),
            "--per-query-metrics", str(metrics), "--bins", "2",
        ]) == 0
        out = capsys.readouterr().out
        assert "0.8000" in out and "0.2000" in out


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert main(["search", "--nonsense"]) == 1
        assert main([]) == 1

    def test_out_of_range_flag(self, tmp_path, indexed_corpus):
        queries = tmp_path / "q.jsonl"
        write_lines(queries, json.dumps({"id": "q1", "vector": {"colombia": 1.0}}))
        assert main([
            "search", "--index", str(indexed_corpus), "--queries", str(queries),
            "--k", "0", "--out", str(tmp_path / "r.trec"),
        ]) == 1

    def test_data_error_missing_file(self, tmp_path):
        assert main(["index", "--vectors", str(tmp_path / "nope.jsonl"),
                     "--out", str(tmp_path / "o.svix")]) == 2

    def test_data_error_bad_json(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text("{broken\n")
        assert main(["index", "--vectors", str(bad), "--out", str(tmp_path / "o")]) == 2

    def test_help_exits_zero(self):
        with pytest.raises(SystemExit) as exc:
            main(["--help"])
        assert exc.value.code == 0
