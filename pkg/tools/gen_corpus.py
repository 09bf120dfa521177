"""Generate fixtures/malformed_corpus.json: 20 damaged model outputs.

Each item carries the visitor utterance that triggers it, the raw text the
backend returns, whether the JSON repair pipeline is expected to recover a
structured response, and any made-up painting names/ids that must never
surface in a feedback bundle. Run from the repository root:
python tools/gen_corpus.py
"""

from __future__ import annotations

import json
from pathlib import Path

ITEMS = [
    {
        "name": "fenced json",
        "response": "```json\n{\"Response\": \"The Mona Lisa rewards patience.\", \"Context\": \"Key points:\\n- sfumato\", \"Tours\": [\"painting 000\"]}\n```",
        "repairable": True,
    },
    {
        "name": "fence without language tag",
        "response": "```\n{\"Response\": \"The Scream is a woodcut of anxiety in paint.\", \"Tours\": [\"painting 003\"]}\n```",
        "repairable": True,
    },
    {
        "name": "leading prose",
        "response": "Sure! Here is what I found:\n{\"Response\": \"Impression, Sunrise named a movement.\", \"Tours\": [\"painting 005\"]}",
        "repairable": True,
    },
    {
        "name": "trailing prose",
        "response": "{\"Response\": \"The Birth of Venus is our west wall treasure.\", \"Tours\": [\"painting 007\"]}\nI hope that helps!",
        "repairable": True,
    },
    {
        "name": "python single quotes",
        "response": "{'Response': 'A quiet room suits The Starry Night.', 'Tours': ['painting 002']}",
        "repairable": True,
    },
    {
        "name": "trailing comma in array",
        "response": "{\"Response\": \"Two Picasso works sit side by side.\", \"Tours\": [\"painting 010\", \"painting 012\",]}",
        "repairable": True,
    },
    {
        "name": "trailing comma in object",
        "response": "{\"Response\": \"The Night Watch steps out of shadow.\", \"Tours\": [\"painting 016\"], }",
        "repairable": True,
    },
    {
        "name": "hallucinated painting name",
        "response": "{\"Response\": \"Two good stops on this wall.\", \"Tours\": [\"Sunset over the Imaginary Sea\", \"painting 003\"]}",
        "repairable": True,
        "hallucinated": ["Sunset over the Imaginary Sea"],
    },
    {
        "name": "hallucinated painting id",
        "response": "{\"Response\": \"A short detour worth taking.\", \"Tours\": [\"painting 999\", \"painting 005\"]}",
        "repairable": True,
        "hallucinated": ["painting 999"],
    },
    {
        "name": "unknown extra keys",
        "response": "{\"Response\": \"American Gothic stares right back.\", \"Mood\": \"cheerful\", \"Confidence\": 0.9, \"Tours\": [\"painting 017\"]}",
        "repairable": True,
    },
    {
        "name": "tours as bare string",
        "response": "{\"Response\": \"The Great Wave is one print from a famous series.\", \"Tours\": \"painting 013\"}",
        "repairable": True,
    },
    {
        "name": "nested fences",
        "response": "```json\n```json\n{\"Response\": \"Water Lilies dissolves the pond into light.\", \"Tours\": [\"painting 014\"]}\n```\n```",
        "repairable": True,
    },
    {
        "name": "curly quotes",
        "response": "{“Response”: “Gold leaf everywhere in The Kiss.”, “Tours”: [“painting 022”]}",
        "repairable": True,
    },
    {
        "name": "top level array",
        "response": "[{\"Response\": \"Nighthawks keeps the lights on late.\", \"Tours\": [\"painting 021\"]}]",
        "repairable": True,
    },
    {
        "name": "mixed quote styles",
        "response": "{'Response': \"Les Demoiselles d'Avignon startles even now.\", 'Tours': ['painting 012']}",
        "repairable": True,
    },
    {
        "name": "byte order mark prefix",
        "response": "﻿ \n {\"Response\": \"Guernica is painted protest.\", \"Tours\": [\"painting 010\"]}",
        "repairable": True,
    },
    {
        "name": "truncated mid string",
        "response": "{\"Response\": \"The story begins with",
        "repairable": False,
    },
    {
        "name": "truncated mid array",
        "response": "{\"Response\": \"Three stops today.\", \"Tours\": [\"painting 000\", \"painti",
        "repairable": False,
    },
    {
        "name": "prose refusal",
        "response": "I am sorry, I cannot format that as JSON, but the museum is lovely and the east wall is a fine place to start.",
        "repairable": False,
    },
    {
        "name": "apostrophes inside single quotes",
        "response": "{'Response': 'It's a masterpiece, and it's staying that way.'}",
        "repairable": False,
    },
]


def main() -> None:
    items = []
    for index, item in enumerate(ITEMS, start=1):
        items.append(
            {
                "utterance": f"tell me about display item {index:02d}",
                "name": item["name"],
                "response": item["response"],
                "repairable": item["repairable"],
                "hallucinated": item.get("hallucinated", []),
            }
        )
    out = Path(__file__).resolve().parents[1] / "fixtures" / "malformed_corpus.json"
    out.write_text(json.dumps(items, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(items)} items)")


if __name__ == "__main__":
    main()
