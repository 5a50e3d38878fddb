#!/usr/bin/env python3
"""Regenerates the bundled synthetic fixture corpus and test embedding file.

Output is deterministic; the committed files under data/ were produced by
running this script with no arguments from the repository root.
"""

import json
import random
from pathlib import Path

import numpy as np

DATA = Path(__file__).resolve().parent.parent

AUTHORS = [
    ("Josiah Whitfield", 1793),
    ("Ambrose Caldwell", 1817),
    ("Cornelius Hale", 1841),
    ("Ezra Pemberton", 1865),
    ("Thaddeus Morrow", 1889),
    ("Warren Ashby", 1913),
    ("Franklin Dorsey", 1937),
    ("Harriet Lindqvist", 1961),
    ("Marcus Okafor", 1985),
    ("Elena Castellano", 2009),
]

# Economy-annotated documents per author (six documents each). Rising density
# across the synthetic timeline.
ECONOMY_QUOTA = [0, 0, 1, 1, 2, 2, 3, 4, 5, 6]

BANK = {
    "trade": [
        "The tariff on foreign goods has strengthened our domestic commerce.",
        "Our commerce with the nations of Europe continues to expand.",
        "Exports of grain and cotton reached new heights this season.",
        "A fair trade agreement with our neighbors will benefit every port.",
        "Merchants report that trade along the coast has never been stronger.",
        "The tariff schedule must be revised to encourage commerce.",
        "New markets abroad welcome our exports of manufactured goods.",
    ],
    "jobs": [
        "Millions of workers are seeking steady jobs and fair wages.",
        "Employment in our factories has risen for the third straight year.",
        "We must lower unemployment by investing in skills for every worker.",
        "Good jobs are the foundation of a strong middle class.",
        "Rising wages mean that workers share in the gains of their labor.",
        "The latest report shows employment growing in every region.",
    ],
    "climate": [
        "The warming climate threatens our farms and our coastal cities.",
        "We will cut carbon emissions from power plants.",
        "Climate change demands cooperation among all peoples.",
        "Cleaner air and lower emissions will protect future generations.",
    ],
    "energy": [
        "Our dependence on foreign oil and petroleum leaves the nation vulnerable.",
        "The price of oil and refined petroleum rose sharply this winter.",
        "Reserves of oil and petroleum must be managed for the public good.",
        "I direct the Secretary to release oil and petroleum from the strategic reserve.",
        "Offshore oil drilling and petroleum exports are subject to new review.",
        "Oil shortages have raised fuel costs for families.",
        "Domestic oil production has reached record levels.",
        "Energy independence will free us from the volatility of world markets.",
    ],
    "economy": [
        "The economy grew steadily throughout the year.",
        "Our economic recovery is gaining strength.",
    ],
    "native": [
        "Peace with the Cherokee and the other tribes remains our constant object.",
        "Agents have been sent to the tribes on the western frontier.",
        "The Cherokee nation has sent a delegation to the capital.",
        "Promises made to the Indian tribes must be honored in good faith.",
        "The Apache bands in the southwest have agreed to a truce.",
    ],
    "race": [
        "The evil of slavery divides our union.",
        "Civil rights must be secured for every citizen.",
        "Segregation in public schools is a stain upon the republic.",
        "Racial equality is a promise we have yet to keep.",
    ],
    "gay": [
        "Gay rights are human rights.",
        "Same sex couples deserve equal protection under law.",
        "No American should face discrimination for being LGBT.",
    ],
    "foreign": [
        "Our diplomacy seeks peace among distant peoples.",
        "The treaty of friendship was ratified by the Senate.",
        "Our ambassadors report friendly relations abroad.",
    ],
    "defense": [
        "The army and navy stand ready to defend the republic.",
        "Military readiness remains a priority of this administration.",
        "Our troops have served with honor in distant lands.",
    ],
    "terror": [
        "Terrorism threatens free people everywhere.",
        "We will defeat the terror networks that attack our citizens.",
        "The terrorists who plotted these attacks will be brought to justice.",
    ],
    "nuclear": [
        "Nuclear weapons pose the gravest danger to mankind.",
        "We seek to reduce nuclear arsenals through patient negotiation.",
        "The spread of nuclear weapons must be halted.",
    ],
    "health": [
        "Access to health care should reach every family.",
        "Disease control centers have contained the outbreak.",
        "New hospitals are being built in rural areas.",
    ],
    "filler": [
        "The Congress assembled in the capital this winter.",
        "We give thanks for the blessings bestowed upon our people.",
        "I commend the members of both houses for their diligence.",
        "The census shows our population continues to grow.",
        "Our public lands extend from ocean to ocean.",
        "The postal service now reaches every village.",
        "Education opens the door of opportunity.",
        "Roads and canals connect distant communities.",
        "The judiciary must remain independent and fair.",
        "Let us proceed with courage and humility.",
        "Our history teaches patience and resolve.",
        "The harvest this autumn was abundant.",
        "Citizens from every state gathered to celebrate the anniversary.",
        "The libraries of our towns are filled with readers.",
        "I ask the Congress to act promptly on these recommendations.",
        "This day shall be observed with ceremonies across the land.",
        "Volunteers have served their neighbors with generosity.",
        "The mail and the telegraph bind our country together.",
        "We honor the memory of those who came before us.",
        "Our fleet patrols the Indian Ocean to keep sea lanes open.",
        "The U.S. Congress met in special session.",
    ],
}


def economy_theme(author_idx, rng):
    if author_idx <= 4:
        return "trade"
    if author_idx <= 6:
        return rng.choice(["trade", "jobs"])
    return rng.choice(["jobs", "energy", "energy", "climate"])


def other_themes(author_idx):
    if author_idx <= 2:
        return ["native", "foreign", "defense"]
    if author_idx <= 5:
        return ["race", "foreign", "defense", "native"]
    if author_idx <= 7:
        return ["nuclear", "race", "health", "defense"]
    return ["terror", "nuclear", "gay", "health"]


def pick_kind(author_idx, doc_idx, theme, rng):
    if doc_idx == 0:
        return "InauguralAddress"
    if theme == "energy":
        return rng.choice(["Proclamation", "ExecutiveAction"])
    pool = ["StateOfUnionReport", "StateOfUnionReport", "Proclamation"]
    if author_idx >= 5:
        pool += ["PublicSpeech", "ExecutiveAction"]
    if author_idx >= 7:
        pool += ["PressRelease", "CommencementAddress", "CampaignSpeech"]
    return rng.choice(pool)


def make_corpus():
    rng = random.Random(1862)
    docs = []
    for a, (author, start) in enumerate(AUTHORS):
        quota = ECONOMY_QUOTA[a]
        # Economy documents sit at the end of each author's list so that the
        # inaugural address stays thematically neutral for early authors.
        plan = ["other"] * (6 - quota) + ["economy"] * quota
        for d, slot in enumerate(plan):
            sentences = []
            if slot == "economy":
                theme = economy_theme(a, rng)
                sentences += rng.sample(BANK[theme], 3)
                if rng.random() < 0.5:
                    sentences.append(rng.choice(BANK["economy"]))
            else:
                theme = rng.choice(other_themes(a))
                sentences += rng.sample(BANK[theme], 2)
            filler = [s for s in BANK["filler"] if "Indian Ocean" not in s]
            sentences += rng.sample(filler, rng.randint(5, 8))
            rng.shuffle(sentences)
            # Paragraph break in the middle of the document.
            mid = len(sentences) // 2
            body = " ".join(sentences[:mid]) + "\n\n" + " ".join(sentences[mid:])
            year = start + d + rng.randint(0, 1)
            month = rng.randint(1, 12)
            day = rng.randint(1, 28)
            kind = pick_kind(a, d, theme, rng)
            slug = author.split()[-1].lower()
            docs.append({
                "id": f"{slug}-{year}-{d:02d}",
                "title": f"{kind} of {year}" if kind != "InauguralAddress" else f"Inaugural Address of {year}",
                "author": author,
                "date": f"{year:04d}-{month:02d}-{day:02d}",
                "kind": kind,
                "text": body,
            })
    # Vetoed mention: "indian" inside "Indian Ocean" must not count as a
    # native_americans match.
    docs[-7]["text"] += " " + BANK["filler"][-2] + " " + BANK["filler"][-2].replace("patrols", "guards")
    # One record with a kind outside the vocabulary.
    docs[25]["kind"] = "Memorandum"
    docs[25]["title"] = docs[25]["title"].split(" of ")[0] + " memorandum"
    return docs


CLUSTERS = {
    "royalty": ["king", "queen", "prince", "princess", "monarch", "throne", "crown", "royal"],
    "fruit": ["banana", "apple", "orange", "mango", "fruit", "pear", "grape", "cherry"],
    "war": ["war", "conflict", "battle", "warfare", "combat", "hostilities", "fighting", "invasion"],
    "military": ["army", "navy", "military", "troops", "soldiers", "forces", "defense", "fleet"],
    "energy": ["oil", "petroleum", "crude", "fuel", "gasoline", "energy", "gas", "refinery"],
    "trade": ["trade", "tariff", "commerce", "exports", "imports", "markets", "merchants", "goods"],
    "jobs": ["jobs", "employment", "workers", "wages", "labor", "unemployment", "hiring", "payroll"],
    "climate": ["climate", "emissions", "warming", "carbon", "pollution", "environmental", "greenhouse", "temperatures"],
    "health": ["health", "disease", "hospitals", "medicine", "doctors", "patients", "vaccine", "outbreak"],
    "native": ["cherokee", "tribes", "apache", "indian", "sioux", "reservation", "navajo", "chiefs"],
    "race": ["slavery", "segregation", "equality", "racial", "discrimination", "abolition", "emancipation", "civil"],
    "terror": ["terror", "terrorism", "terrorists", "attacks", "extremists", "bombing", "hijackers", "militants"],
    "nuclear": ["nuclear", "weapons", "arsenals", "missiles", "warheads", "uranium", "proliferation", "atomic"],
    "diplomacy": ["diplomacy", "treaty", "ambassadors", "embassy", "negotiations", "envoy", "alliance", "summit"],
    "economy": ["economy", "economic", "growth", "recession", "inflation", "prosperity", "recovery", "depression"],
}

GENERIC = [
    "congress", "capital", "winter", "blessings", "people", "members", "houses", "census",
    "population", "lands", "ocean", "postal", "village", "education", "door", "opportunity",
    "roads", "canals", "communities", "judiciary", "courage", "humility", "history", "patience",
    "resolve", "harvest", "autumn", "citizens", "state", "anniversary", "libraries", "towns",
    "readers", "recommendations", "day", "ceremonies", "land", "volunteers", "neighbors",
    "generosity", "mail", "telegraph", "country", "memory", "session", "river", "mountain",
    "bridge", "school", "church", "farm", "city", "street", "garden", "music", "painting",
    "poetry", "science", "sport", "holiday", "summer", "spring", "morning", "evening", "table",
    "chair", "window", "paper", "letter", "book", "clock", "road", "island", "forest", "desert",
    "valley", "harbor", "train", "ship", "horse",
]


def make_embeddings():
    rs = np.random.RandomState(2017)
    dim = 50
    # Orthogonal cluster centres keep unrelated clusters apart; the spread
    # within a cluster comes from the per-word noise alone.
    q, _ = np.linalg.qr(rs.normal(size=(dim, len(CLUSTERS))))
    centers = q.T * np.sqrt(dim)
    words, vecs = [], []
    for center, (name, members) in zip(centers, CLUSTERS.items()):
        for w in members:
            words.append(w)
            vecs.append(center + 0.45 * rs.normal(size=dim))
    for w in GENERIC:
        words.append(w)
        vecs.append(rs.normal(size=dim))
    assert len(words) == 200, len(words)
    assert len(set(words)) == 200
    lines = []
    for w, v in zip(words, vecs):
        lines.append(w + " " + " ".join(f"{x:.6f}" for x in v))
    return "\n".join(lines) + "\n"


def main():
    docs = make_corpus()
    with open(DATA / "fixture_corpus.jsonl", "w", encoding="utf-8") as f:
        for d in docs:
            f.write(json.dumps(d, ensure_ascii=False) + "\n")
    (DATA / "embeddings_200.txt").write_text(make_embeddings(), encoding="utf-8")


if __name__ == "__main__":
    main()
