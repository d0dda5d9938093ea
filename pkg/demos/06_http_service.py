"""The HTTP surface, exercised end to end on localhost.

Starts a stub generation endpoint (plays the LLM), boots the service
against it, ingests one article over POST /ingest/articles, then asks
GET /query and GET /status. Everything runs in this process and shuts
down at the end.
"""

import json
import tempfile
import threading
import time
from http.server import BaseHTTPRequestHandler, HTTPServer

import requests
import uvicorn

from q2q.config import ServiceConfig
from q2q.service import create_app

QUESTIONS = """- Which is the longest river in Africa?
- What is the total length of Nile river?
- Where does the Nile drain?"""


class StubGeneration(BaseHTTPRequestHandler):
    def do_POST(self):
        self.rfile.read(int(self.headers["Content-Length"]))
        payload = json.dumps({"text": QUESTIONS}).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


generation_server = HTTPServer(("127.0.0.1", 0), StubGeneration)
threading.Thread(target=generation_server.serve_forever, daemon=True).start()
generation_url = f"http://127.0.0.1:{generation_server.server_port}"
print(f"stub generation endpoint at {generation_url}")

with tempfile.TemporaryDirectory() as tmp:
    config = ServiceConfig(
        generation_endpoint=generation_url,
        index_path=f"{tmp}/index.q2q",
        store_path=f"{tmp}/store.json",
        listen_port=8123,
    )
    app = create_app(config)
    server = uvicorn.Server(
        uvicorn.Config(app, host="127.0.0.1", port=config.listen_port, log_level="warning")
    )
    threading.Thread(target=server.run, daemon=True).start()
    base = f"http://127.0.0.1:{config.listen_port}"
    while not server.started:
        time.sleep(0.05)
    print(f"service listening at {base}")

    article = {
        "id": "nile",
        "title": "Nile",
        "sections": [
            {
                "title": "Course",
                "text": (
                    "The Nile is a major north-flowing river in northeastern Africa. "
                    "It is about 6,650 km long. "
                    "The river drains into the Mediterranean Sea."
                ),
            }
        ],
    }
    report = requests.post(f"{base}/ingest/articles", data=json.dumps(article)).json()
    print("\nPOST /ingest/articles ->", report)

    answer = requests.get(f"{base}/query", params={"q": "length of Nile", "k": 1}).json()
    print("\nGET /query?q=length of Nile ->")
    print(json.dumps(answer["results"][0], indent=2))

    print("\nGET /status ->", requests.get(f"{base}/status").json())
    server.should_exit = True

generation_server.shutdown()
