"""Generate fixtures/scripted_rules.json: the deterministic rule table for
the scripted chat backend.

Rules are checked in order against the exchange's turn text (case
insensitive, multiline, dot does not cross lines). The three bot kinds are
distinguished by the fixed first line of their user turn. Run from the
repository root:  python tools/gen_rules.py
"""

from __future__ import annotations

import json
from pathlib import Path

CLS = r"^classify the visitor request.*\nvisitor request:"
CMP = r"^list the information kinds.*\nvisitor request:"
Q = r"^question:"


def j(payload) -> str:
    return json.dumps(payload)


RULES: list[dict] = []


def rule(match: str, response) -> None:
    RULES.append({"match": match, "response": response if isinstance(response, str) else j(response)})


# --- classifier -------------------------------------------------------------

rule(CLS + r".*(summarize|summary|sum up)", {"tasks": ["information enhancement"], "summary": True})
rule(
    CLS + r".*(take me|walk me|lead me|bring me|first three paintings|next painting)",
    {"tasks": ["navigation"], "summary": False},
)
rule(
    CLS + r".*(i really like|i love|i prefer|i am mostly here|show me .*first|i want to see some different)",
    {"tasks": ["personalized preference"], "summary": False},
)
rule(CLS + r".*guide me", {"tasks": ["information enhancement", "navigation"], "summary": False})
rule(CLS, {"tasks": ["information enhancement"], "summary": False})

# --- compiler ---------------------------------------------------------------

rule(CMP + r".*(popular|most visited)", {"info": ["social", "spatial"]})
rule(
    CMP + r".*(take me|guide me|walk me|lead me|bring me|next painting|first three)",
    {"info": ["spatial"]},
)
rule(
    CMP + r".*(i really like|i love|i prefer|show me .*first|i want to see some different)",
    {"info": []},
)
rule(CMP, {"info": ["semantic"]})

# --- stage 2: tour planning and summaries ------------------------------------

rule(
    Q + r".*plan a tour.*30 minutes",
    {
        "Response": (
            "With half an hour you can comfortably see our eight most loved works. "
            "Begin with the Mona Lisa, cross to The Scream and Impression, Sunrise, "
            "linger at The Birth of Venus, then finish along the far rooms with The "
            "Great Wave off Kanagawa, Section of Goddess of Luo River, Night in Black "
            "and Gold, The falling Rocket, and Composition no.10."
        ),
        "Context": (
            "Recommendation for the tour:\n- Mona Lisa\n- The Scream\n- Impression, Sunrise"
            "\n- The Birth of Venus\n- The Great Wave off Kanagawa\n- Section of Goddess of Luo River"
            "\n- Night in Black and Gold, The falling Rocket\n- Composition no.10"
        ),
        "Landmark": "none",
        "Tasks": ["information enhancement"],
        "Tours": [
            "painting 000",
            "painting 003",
            "painting 005",
            "painting 007",
            "painting 013",
            "painting 008",
            "painting 020",
            "painting 018",
        ],
    },
)
rule(
    Q + r".*summarize the tour and suggest",
    {
        "Response": (
            "Today you walked from Impression, Sunrise past The Scream to the Mona Lisa, "
            "three very different ways of looking. The Last Supper hangs just along this "
            "wall and would round the visit off beautifully."
        ),
        "Context": "Recommendation for the tour:\n- The Last Supper",
        "Landmark": "Mona Lisa",
        "Tasks": ["information enhancement"],
        "Tours": ["painting 005", "painting 003", "painting 001"],
    },
)
rule(
    Q + r".*summarize this tour",
    {
        "Response": (
            "You have seen the Mona Lisa and The Scream so far, a fine pairing of calm "
            "and storm. If you have energy left, Impression, Sunrise is a gentle finale."
        ),
        "Context": "Tour recap:\n- Mona Lisa\n- The Scream\nOne more to consider:\n- Impression, Sunrise",
        "Landmark": "none",
        "Tasks": ["information enhancement"],
        "Tours": ["painting 000", "painting 003", "painting 005"],
    },
)

# --- stage 2: explorer question patterns -------------------------------------

rule(
    Q + r".*similar style",
    {
        "Response": (
            "Yes, two more Renaissance works hang here. The Mona Lisa and The Last "
            "Supper share this painting's period and poise."
        ),
        "Context": "Recommendation for the tour:\n- Mona Lisa\n- The Last Supper",
        "Landmark": "The Birth of Venus",
        "Tasks": ["information enhancement"],
        "Tours": ["painting 000", "painting 001"],
    },
)
rule(
    Q + r".*how many paintings",
    {
        "Response": (
            "There are 35 paintings on display, hung along the four walls and the "
            "central partition of this single hall."
        ),
        "Context": "Key facts:\n- 35 paintings on display\n- one hall with a central partition",
        "Landmark": "none",
        "Tasks": ["information enhancement"],
        "Tours": [],
    },
)
rule(
    Q + r".*most interesting details",
    {
        "Response": (
            "Look first at the Goddess Venus herself, poised on the shell. Then find "
            "Zephyrus and Aura driving her ashore on the left, and the Hora of Spring "
            "waiting with the flowered cloak on the right."
        ),
        "Context": "Worth a close look:\n- Goddess Venus\n- Zephyrus and Aura\n- Hora of Spring",
        "Landmark": "The Birth of Venus",
        "Tasks": ["information enhancement"],
        "Tours": [],
        "Regions": [["Goddess Venus", 3], ["Zephyrus and Aura", 2], ["Hora of Spring", 1]],
    },
)
rule(
    Q + r".*abstract painting",
    {
        "Response": (
            "We have three abstract works: Composition no.10 and Broadway Boogie "
            "Woogie by Mondrian on the south wall, and Kandinsky's Composition VIII "
            "beside them."
        ),
        "Context": (
            "Recommendation for the tour:\n- Composition no.10\n- Broadway Boogie Woogie\n- Composition VIII"
        ),
        "Landmark": "none",
        "Tasks": ["information enhancement"],
        "Tours": ["painting 018", "painting 019", "painting 030"],
    },
)
rule(
    Q + r".*popular paintings i haven",
    {
        "Response": (
            "The most loved stops you have not reached yet are Impression, Sunrise "
            "and The Great Wave off Kanagawa, both on the west side."
        ),
        "Context": "Still ahead of you:\n- Impression, Sunrise\n- The Great Wave off Kanagawa",
        "Landmark": "none",
        "Tasks": ["information enhancement"],
        "Tours": None,
    },
)
rule(
    Q + r".*introduce",
    {
        "Response": (
            "Stand back half a step and let it settle. The composition pulls your eye "
            "in a slow circle, and the light explains why this one draws a crowd."
        ),
        "Context": "Key points:\n- follow the composition first\n- then study the light",
        "Landmark": "none",
        "Tasks": ["information enhancement"],
        "Tours": [],
    },
)

# --- stage 2: navigator -------------------------------------------------------

rule(
    Q + r".*take me to visit the painting named the birth of venus",
    {
        "Introduction": (
            "Certainly! The Birth of Venus by Sandro Botticelli hangs on the west "
            "wall. Follow me."
        ),
        "Tour": ["The Birth of Venus"],
        "TourID": ["painting 007"],
    },
)
rule(
    Q + r".*(most popular painting|take me to (the )?mona lisa)",
    {"Introduction": "Sure! Follow me.", "Tour": ["Mona Lisa"], "TourID": ["painting 000"]},
)
rule(
    Q + r".*first three paintings",
    {
        "Introduction": "Of course, the first three in the collection, one after another. Follow me.",
        "Tour": ["Mona Lisa", "The Last Supper", "The Starry Night"],
        "TourID": ["painting 000", "painting 001", "painting 002"],
    },
)
rule(
    Q + r".*next painting",
    {
        "Introduction": "Sure! Follow me.",
        "Tour": ["Along the River During the Qingming Festival"],
        "TourID": ["painting 009"],
    },
)

# --- stage 2: identifier --------------------------------------------------------

rule(
    Q + r".*(i really like|i love|i prefer|show me .*first|i want to see some different)",
    {"Response": "Lovely, noted. I will lean toward that as we continue."},
)

# --- stage 2: generic fallbacks --------------------------------------------------

rule(
    Q + r".*(take me|guide me|walk me|lead me|bring me)",
    {"Introduction": "Sure! Follow me.", "Tour": [], "TourID": []},
)
rule(
    Q,
    {
        "Response": (
            "Happy to help. You can ask about any painting here, or ask me to take "
            "you to one."
        ),
        "Context": "Things you can ask:\n- introduce a painting\n- plan a route\n- walk me somewhere",
        "Landmark": "none",
        "Tasks": ["information enhancement"],
        "Tours": [],
    },
)


def main() -> None:
    out = Path(__file__).resolve().parents[1] / "fixtures" / "scripted_rules.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(RULES, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(RULES)} rules)")


if __name__ == "__main__":
    main()
