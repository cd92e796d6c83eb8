"""Drive the whole file-based CLI pipeline in a temporary directory.

Every stage reads and writes the documented formats (vector/query JSONL,
TREC run/qrels, binary index), so each can be inspected or swapped out.
The same flow works from a shell:

    setvec encode --docs docs.jsonl --bm25 --out vectors.jsonl
    setvec index --vectors vectors.jsonl --out corpus.svix
    setvec compose --queries queries.jsonl --vectors atomic.jsonl --out composed.jsonl
    setvec search --index corpus.svix --queries queries.jsonl --k 10 --out run.trec
    setvec eval --run run.trec --qrels gold.qrels --metrics ndcg@10,recall@100
"""

import json
import tempfile
from pathlib import Path

from setvec.cli import main


def jsonl(path, *records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records))


def run(argv):
    print(f"$ setvec {' '.join(argv)}")
    code = main(argv)
    assert code == 0, f"exit code {code}"


def demo(root: Path):
    docs = root / "docs.jsonl"
    jsonl(
        docs,
        {"id": "andes-birds", "text": "birds that fly over the Andes of Colombia"},
        {"id": "venezuela-birds", "text": "birds of Venezuela fly along the coast"},
        {"id": "both", "text": "birds seen in Colombia and Venezuela"},
        {"id": "coffee", "text": "coffee farming in Colombia"},
    )
    vectors = root / "vectors.jsonl"
    run(["encode", "--docs", str(docs), "--tf", "--out", str(vectors)])

    index = root / "corpus.svix"
    run(["index", "--vectors", str(vectors), "--out", str(index)])

    queries = root / "queries.jsonl"
    jsonl(
        queries,
        {
            "qid": "not-venezuela",
            "operator": "difference",
            "method": "disentangled",
            "a": {"birds": 1.0, "colombia": 1.0},
            "b": {"birds": 1.0, "venezuela": 1.0},
        },
    )
    composed = root / "composed.jsonl"
    run(["compose", "--queries", str(queries), "--vectors", str(vectors), "--out", str(composed)])
    print("  composed vector:", json.loads(composed.read_text())["vector"])

    run_file = root / "run.trec"
    run(["search", "--index", str(index), "--queries", str(queries), "--k", "10",
         "--out", str(run_file)])
    print("  run file:")
    for line in run_file.read_text().splitlines():
        print("   ", line)

    qrels = root / "gold.qrels"
    qrels.write_text("not-venezuela 0 andes-birds 1\nnot-venezuela 0 coffee 1\n")
    run(["eval", "--run", str(run_file), "--qrels", str(qrels), "--metrics", "ndcg@3,recall@3"])


if __name__ == "__main__":
    with tempfile.TemporaryDirectory() as tmp:
        demo(Path(tmp))
