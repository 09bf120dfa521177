"""Virtual-museum tour guidance engine.

Converts visitor requests into guidance-seeking contexts via a two-stage
pack-of-bots pipeline (Classifier/Compiler, then Explorer/Navigator/Identifier)
and renders them as deterministic multi-modal feedback bundles: voice text,
avatar directives, text window, highlights, virtual screen, minimap, signpost.
"""

__version__ = "0.1.0"
