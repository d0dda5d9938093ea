import csv
import json
import subprocess
import sys
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from q2q.cli import main
from q2q.index import QuestionIndex

import fixture_data

DIM = 64


class _GenerationHandler(BaseHTTPRequestHandler):
    """Returns the canned question list for every prompt."""

    def do_POST(self):
        length = int(self.headers["Content-Length"])
        self.rfile.read(length)
        payload = json.dumps({"text": fixture_data.OBAMA_QUESTIONS_BULLETED}).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture(scope="module")
def generation_url():
    server = HTTPServer(("127.0.0.1", 0), _GenerationHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


@pytest.fixture
def corpus_file(tmp_path):
    path = tmp_path / "articles.jsonl"
    path.write_text(
        json.dumps(
            {
                "id": "obama",
                "title": fixture_data.OBAMA_TITLE,
                "sections": [
                    {"title": fixture_data.OBAMA_SECTION, "text": fixture_data.OBAMA_RAW}
                ],
            }
        )
        + "\n",
        encoding="utf-8",
    )
    return path


def flags(tmp_path):
    return [
        "--index-path", str(tmp_path / "index.q2q"),
        "--store-path", str(tmp_path / "store.json"),
        "--embedding-dim", str(DIM),
    ]


def ingest(tmp_path, corpus_file, generation_url):
    rc = main(
        ["ingest", str(corpus_file), "--generation-endpoint", generation_url]
        + flags(tmp_path)
    )
    assert rc == 0


class TestIngestAndQuery:
    def test_ingest_then_query(self, tmp_path, corpus_file, generation_url, capsys):
        ingest(tmp_path, corpus_file, generation_url)
        out = capsys.readouterr().out
        assert "questions indexed: 17" in out

        rc = main(["query", "Where was Barack Obama born?", "-k", "1"] + flags(tmp_path))
        assert rc == 0
        body = json.loads(capsys.readouterr().out)
        assert body["results"][0]["score"] == 1.0
        assert body["results"][0]["matched_question"] == "Where was Barack Obama born?"

    def test_reindex_reports_swap(self, tmp_path, corpus_file, generation_url, capsys):
        ingest(tmp_path, corpus_file, generation_url)
        capsys.readouterr()
        mutated = tmp_path / "mutated.jsonl"
        record = json.loads(corpus_file.read_text())
        record["sections"][0]["text"] = "A fully rewritten paragraph about Obama."
        mutated.write_text(json.dumps(record) + "\n", encoding="utf-8")

        rc = main(
            ["reindex", str(mutated), "--generation-endpoint", generation_url, "--json"]
            + flags(tmp_path)
        )
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["questions_indexed"] == 17

    def test_ingest_without_endpoint_fails_cleanly(self, tmp_path, corpus_file, capsys):
        rc = main(["ingest", str(corpus_file)] + flags(tmp_path))
        assert rc == 1
        assert "generation endpoint" in capsys.readouterr().err


class TestIndexCommands:
    def test_save_and_load_roundtrip(self, tmp_path, corpus_file, generation_url, capsys):
        ingest(tmp_path, corpus_file, generation_url)
        dest = tmp_path / "copy.q2q"
        assert main(["save-index", str(dest)] + flags(tmp_path)) == 0
        assert QuestionIndex.load(dest).count() == 17

        fresh = tmp_path / "fresh"
        fresh.mkdir()
        rc = main(
            ["load-index", str(dest), "--index-path", str(fresh / "index.q2q"),
             "--store-path", str(fresh / "store.json"), "--embedding-dim", str(DIM)]
        )
        assert rc == 0
        assert QuestionIndex.load(fresh / "index.q2q").count() == 17

    def test_load_index_missing_file_errors(self, tmp_path, capsys):
        rc = main(["load-index", str(tmp_path / "nope.q2q")] + flags(tmp_path))
        assert rc == 1
        assert "error:" in capsys.readouterr().err


class TestEvalAblation:
    def test_csv_report(self, tmp_path, corpus_file, generation_url, capsys):
        ingest(tmp_path, corpus_file, generation_url)
        queries = tmp_path / "queries.txt"
        queries.write_text("\n".join(fixture_data.ABLATION_QUERIES), encoding="utf-8")
        out_csv = tmp_path / "ablation.csv"
        rc = main(
            ["eval-ablation", str(queries), "--output", str(out_csv)] + flags(tmp_path)
        )
        assert rc == 0
        with open(out_csv, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == len(fixture_data.ABLATION_QUERIES)
        q2q_mean = sum(float(r["q2q_score"]) for r in rows) / len(rows)
        q2p_mean = sum(float(r["q2p_score"]) for r in rows) / len(rows)
        assert q2q_mean > q2p_mean


class TestConsoleScript:
    def test_entry_point_help(self):
        proc = subprocess.run(
            [sys.executable, "-m", "q2q.cli", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "ingest-wikidata" in proc.stdout
