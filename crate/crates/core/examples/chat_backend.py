#!/usr/bin/env python3
"""Subprocess backend that asks an OpenAI-compatible chat endpoint to fill
each hole.

    anchorfill predict --config examples/chat_backend.toml --dataset holes.ndjson --out chat.ndjson

Reads one request per line on stdin and writes one answer per line on
stdout. Set CHAT_API_URL (default https://api.openai.com/v1/chat/completions),
CHAT_API_KEY and CHAT_MODEL.
"""
import json
import os
import sys
import urllib.request

PROMPT = (
    "A sentence from a translation memory is shown with one word replaced by {hole}. "
    "The translation of the sentence it was matched against is given for context.\n"
    "Sentence: {masked}\n"
    "Context translation: {source}\n"
    "Reply with the single word that belongs at {hole}, nothing else."
)


def ask(req):
    body = {
        "model": os.environ.get("CHAT_MODEL", "gpt-4o-mini"),
        "temperature": 0,
        "messages": [{
            "role": "user",
            "content": PROMPT.format(
                hole="<hole>",
                masked=" ".join(req["masked_segment"]),
                source=req["tu_source"],
            ),
        }],
    }
    http = urllib.request.Request(
        os.environ.get("CHAT_API_URL", "https://api.openai.com/v1/chat/completions"),
        data=json.dumps(body).encode(),
        headers={
            "Content-Type": "application/json",
            "Authorization": "Bearer " + os.environ["CHAT_API_KEY"],
        },
    )
    with urllib.request.urlopen(http, timeout=60) as resp:
        answer = json.load(resp)["choices"][0]["message"]["content"].strip()
    return {"id": req["id"], "candidates": [{"token": answer, "score": 1.0}]}


def main():
    for line in sys.stdin:
        if not line.strip():
            continue
        req = json.loads(line)
        try:
            out = ask(req)
        except Exception as e:  # reported per query, the batch goes on
            out = {"id": req["id"], "error": str(e)}
        sys.stdout.write(json.dumps(out) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
