"""Drive the HTTP API end to end: start a server on an ephemeral port,
then exercise every endpoint the way the web UI does."""

import json
import sys
import threading
import urllib.request
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from routegen.service import ApiServer, ApiSession
from _common import ensure_demo_model

model, corpus = ensure_demo_model()
session = ApiSession(model=model, corpus=corpus,
                     info={"checkpoint_sha256": "demo", "training": None})
server = ApiServer(session, host="127.0.0.1", port=0)
port = server.server_address[1]
threading.Thread(target=server.serve_forever, daemon=True).start()
base = f"http://127.0.0.1:{port}"
print(f"serving on {base}\n")


def call(method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(f"{base}{path}", data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req, timeout=10) as resp:
        return json.loads(resp.read())


info = call("GET", "/model/info")
print("GET /model/info ->", json.dumps(info["architecture"]))

sample = call("POST", "/sample", {"count": 2, "seed": 7})
for cand in sample["candidates"]:
    holds = " ".join(h["pos"] for h in cand["holds"])
    print(f"POST /sample    -> valid={cand['report']['valid']!s:5} {holds}")

enc = call("POST", "/encode", {"holds": ["A2", "B5", "C9", "D12", "D15", "E18"]})
print("POST /encode    -> mu[:4] =", [round(v, 3) for v in enc["mu"][:4]])

dec = call("POST", "/decode", {"latent": enc["mu"]})
print("POST /decode    ->", " ".join(h["pos"] for h in dec["holds"]))

interp = call("POST", "/interpolate",
              {"a": [0.0] * 16, "b": enc["mu"], "steps": 4})
for cand in interp["candidates"]:
    holds = " ".join(h["pos"] for h in cand["holds"])
    print(f"POST /interpolate t={cand['t']:.2f} -> {holds}")

server.shutdown()
server.server_close()
print("\ndone")
