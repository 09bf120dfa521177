"""Generate fixtures/museum35.json: a single-floor museum with 35 paintings.

Layout: 44 x 40 m hall centered on the origin, perimeter walls implied by
the bounds, a central partition broken by a doorway, and four columns.
Paintings hang on the perimeter walls and the partition faces. Run from the
repository root:  python tools/gen_museum.py
"""

from __future__ import annotations

import json
from pathlib import Path

BOUNDS_W = 44.0
BOUNDS_H = 40.0
HANG_HEIGHT = 1.5
WALL_GAP = 0.4  # canvas offset from the wall plane

# wall code -> (position builder, facing)
WALLS = {
    "E": (lambda off: [BOUNDS_W / 2 - WALL_GAP, HANG_HEIGHT, off], [-1.0, 0.0]),
    "W": (lambda off: [-BOUNDS_W / 2 + WALL_GAP, HANG_HEIGHT, off], [1.0, 0.0]),
    "N": (lambda off: [off, HANG_HEIGHT, BOUNDS_H / 2 - WALL_GAP], [0.0, -1.0]),
    "S": (lambda off: [off, HANG_HEIGHT, -BOUNDS_H / 2 + WALL_GAP], [0.0, 1.0]),
    "PE": (lambda off: [0.6, HANG_HEIGHT, off], [1.0, 0.0]),
    "PW": (lambda off: [-0.6, HANG_HEIGHT, off], [-1.0, 0.0]),
}

OBSTACLES = [
    # central partition, south and north slabs with a doorway between
    [[-0.5, -20.0], [0.5, -20.0], [0.5, -4.0], [-0.5, -4.0]],
    [[-0.5, 4.0], [0.5, 4.0], [0.5, 20.0], [-0.5, 20.0]],
    # columns
    [[-11.5, -10.5], [-10.5, -10.5], [-10.5, -9.5], [-11.5, -9.5]],
    [[-11.5, 9.5], [-10.5, 9.5], [-10.5, 10.5], [-11.5, 10.5]],
    [[10.5, -10.5], [11.5, -10.5], [11.5, -9.5], [10.5, -9.5]],
    [[10.5, 9.5], [11.5, 9.5], [11.5, 10.5], [10.5, 10.5]],
]

REGIONS = {
    0: [
        {"name": "enigmatic smile", "rect": [0.40, 0.55, 0.20, 0.12], "note": "the famously ambiguous expression"},
        {"name": "folded hands", "rect": [0.35, 0.80, 0.30, 0.15], "note": "calm, carefully modeled hands"},
        {"name": "winding road", "rect": [0.05, 0.35, 0.20, 0.20], "note": "imaginary landscape behind the sitter"},
    ],
    1: [
        {"name": "figure of Christ", "rect": [0.42, 0.35, 0.16, 0.40], "note": "the still center of the composition"},
        {"name": "twelve apostles", "rect": [0.05, 0.35, 0.90, 0.40], "note": "four agitated groups of three"},
    ],
    7: [
        {"name": "Goddess Venus", "rect": [0.35, 0.10, 0.30, 0.80], "note": "newly born, standing on the shell"},
        {"name": "Zephyrus and Aura", "rect": [0.00, 0.15, 0.25, 0.50], "note": "wind spirits blowing her ashore"},
        {"name": "Hora of Spring", "rect": [0.70, 0.20, 0.30, 0.60], "note": "waiting with the flowered cloak"},
    ],
    13: [
        {"name": "the great wave crest", "rect": [0.00, 0.10, 0.45, 0.50], "note": "claw-like foam about to break"},
        {"name": "Mount Fuji", "rect": [0.55, 0.55, 0.20, 0.15], "note": "tiny and distant under the wave"},
        {"name": "fishing boats", "rect": [0.30, 0.55, 0.50, 0.30], "note": "oshiokuri boats riding the swell"},
    ],
}

# n, name, author, year, style, popularity, wall, offset, description
PAINTINGS = [
    (0, "Mona Lisa", "Leonardo da Vinci", 1503, "renaissance", 98, "E", 0.0,
     "Portrait of Lisa Gherardini, famous for its sfumato modeling and elusive smile."),
    (1, "The Last Supper", "Leonardo da Vinci", 1498, "renaissance", 89, "E", -6.0,
     "Mural of the moment Christ announces the betrayal, a study in perspective and grouped reaction."),
    (2, "The Starry Night", "Vincent van Gogh", 1889, "post-impressionism", 88, "E", 6.0,
     "A swirling night sky over Saint-Remy painted from memory and imagination."),
    (3, "The Scream", "Edvard Munch", 1893, "expressionism", 96, "W", 12.0,
     "A figure on a bridge under a blood-red sky, an icon of modern anxiety."),
    (4, "Girl with a Pearl Earring", "Johannes Vermeer", 1665, "baroque", 87, "E", -10.0,
     "A tronie of a girl in a turban, lit against black, with a single pearl."),
    (5, "Impression, Sunrise", "Claude Monet", 1872, "impressionism", 95, "W", 6.0,
     "The harbor of Le Havre at dawn; the canvas that named impressionism."),
    (6, "The Persistence of Memory", "Salvador Dali", 1931, "surrealism", 86, "E", 10.0,
     "Soft melting watches draped over a dream landscape of Port Lligat."),
    (7, "The Birth of Venus", "Sandro Botticelli", 1485, "renaissance", 94, "W", 17.32,
     "Venus arrives at the shore on a shell, blown by wind spirits and met by a Hora of spring."),
    (8, "Section of Goddess of Luo River", "Gu Kaizhi", 400, "chinese ink", 92, "N", -18.0,
     "A scroll section retelling the poet's encounter with the nymph of the Luo River."),
    (9, "Along the River During the Qingming Festival", "Zhang Zeduan", 1145, "chinese ink", 76, "N", -12.0,
     "A panoramic handscroll of Bianjing street life at festival time."),
    (10, "Guernica", "Pablo Picasso", 1937, "cubism", 85, "S", -18.0,
     "A monumental grisaille protest against the bombing of Guernica."),
    (11, "The Old Guitarist", "Pablo Picasso", 1904, "expressionism", 73, "S", -12.0,
     "A gaunt blind musician in blue, from the painter's Blue Period."),
    (12, "Les Demoiselles d'Avignon", "Pablo Picasso", 1907, "cubism", 74, "S", -6.0,
     "Five angular figures that broke open the path toward cubism."),
    (13, "The Great Wave off Kanagawa", "Katsushika Hokusai", 1831, "ukiyo-e", 93, "W", 0.0,
     "A towering wave dwarfs Mount Fuji and three fishing boats in this woodblock print."),
    (14, "Water Lilies", "Claude Monet", 1906, "impressionism", 81, "W", -6.0,
     "The Giverny pond surface dissolving into reflections and floating blossoms."),
    (15, "Liberty Leading the People", "Eugene Delacroix", 1830, "romanticism", 79, "E", -14.0,
     "Liberty personified carries the tricolor over the barricades of July 1830."),
    (16, "The Night Watch", "Rembrandt van Rijn", 1642, "baroque", 80, "E", 14.0,
     "A militia company steps out of shadow in Rembrandt's grandest group portrait."),
    (17, "American Gothic", "Grant Wood", 1930, "realism", 84, "PE", -10.0,
     "A farmer with a pitchfork and his daughter before a carpenter-gothic farmhouse."),
    (18, "Composition no.10", "Piet Mondrian", 1939, "abstract", 90, "S", 6.0,
     "Black lines and primary planes balanced on white, pared to essentials."),
    (19, "Broadway Boogie Woogie", "Piet Mondrian", 1943, "abstract", 70, "S", 12.0,
     "A gridded pulse of yellow, red, and blue blocks echoing Manhattan and boogie-woogie."),
    (20, "Night in Black and Gold, The falling Rocket", "James McNeill Whistler", 1875, "tonalism", 91, "PE", -16.0,
     "Fireworks dissolving over Cremorne Gardens, painted as pure nocturne."),
    (21, "Nighthawks", "Edward Hopper", 1942, "realism", 83, "PW", 10.0,
     "Late customers in a glass-walled diner on an empty night street."),
    (22, "The Kiss", "Gustav Klimt", 1908, "art nouveau", 82, "W", -10.0,
     "An embracing couple wrapped in gold-leaf patterned robes."),
    (23, "A Sunday Afternoon on the Island of La Grande Jatte", "Georges Seurat", 1886, "post-impressionism", 78, "W", -14.0,
     "Parisians at leisure on the Seine, built entirely from dots of color."),
    (24, "Dwelling in the Fuchun Mountains", "Huang Gongwang", 1350, "chinese ink", 68, "N", -6.0,
     "A literati handscroll of the Fuchun river hills, brushed over several years."),
    (25, "A Thousand Li of Rivers and Mountains", "Wang Ximeng", 1113, "chinese ink", 67, "N", 6.0,
     "A blue-green panorama of peaks and waterways painted by a teenage prodigy."),
    (26, "The Garden of Earthly Delights", "Hieronymus Bosch", 1510, "netherlandish", 77, "PW", 16.0,
     "A triptych running from Eden through a garden of pleasures to a dark reckoning."),
    (27, "Las Meninas", "Diego Velazquez", 1656, "baroque", 75, "E", -18.0,
     "The infanta and her retinue, with the painter at work and the royal couple mirrored."),
    (28, "The Raft of the Medusa", "Theodore Gericault", 1819, "romanticism", 72, "E", 18.0,
     "Survivors of the Medusa shipwreck sight rescue at the crest of despair."),
    (29, "Wanderer above the Sea of Fog", "Caspar David Friedrich", 1818, "romanticism", 71, "W", -18.0,
     "A lone figure on a crag contemplates a sea of drifting fog."),
    (30, "Composition VIII", "Wassily Kandinsky", 1923, "abstract", 69, "S", 18.0,
     "Circles, grids, and lines orchestrated as cool geometric counterpoint."),
    (31, "Autumn Colors on the Que and Hua Mountains", "Zhao Mengfu", 1295, "chinese ink", 66, "N", 12.0,
     "Two Jinan mountains remembered for a friend, in archaic calligraphic brushwork."),
    (32, "Early Spring", "Guo Xi", 1072, "chinese ink", 65, "N", 18.0,
     "Mist-wreathed pines and crags awakening, a model of Northern Song landscape."),
    (33, "The Hay Wain", "John Constable", 1821, "romanticism", 64, "W", -2.0,
     "A hay cart fords the Stour by Willy Lott's cottage under an English sky."),
    (34, "Whistler's Mother", "James McNeill Whistler", 1871, "tonalism", 63, "E", 2.0,
     "Arrangement in grey and black: the painter's mother in severe profile."),
]


def build() -> dict:
    artworks = []
    for n, name, author, year, style, pop, wall, offset, desc in PAINTINGS:
        position_of, facing = WALLS[wall]
        artworks.append(
            {
                "id": f"painting {n:03d}",
                "name": name,
                "author": author,
                "year": year,
                "style": style,
                "description": desc,
                "position": position_of(offset),
                "facing": list(facing),
                "popularity": pop,
                "regions": REGIONS.get(n, []),
            }
        )
    return {
        "schema": 1,
        "bounds": {"w": BOUNDS_W, "h": BOUNDS_H},
        "spawn": [0.0, 0.0],
        "obstacles": OBSTACLES,
        "artworks": artworks,
    }


def main() -> None:
    out = Path(__file__).resolve().parents[1] / "fixtures" / "museum35.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(build(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
