#!/usr/bin/env python3
"""Regenerates data/reference_kb.txt, the bundled 200-entity knowledge base.

The output is committed; rerunning with the same seed reproduces it.
"""

import argparse
import random

FIRST = """Ada Alina Bruno Carla Dario Elif Emre Fatma Gavin Hana Ivo Jana Kemal Lena
Marta Nils Oskar Pia Rafael Selin Tomas Ula Viktor Wanda Yusuf Zeynep Aron Bea
Cem Dora Eren Flora Goran Ilse Jonas Kira Leyla Milo Nora Orhan""".split()
LAST = """Akin Bauer Castell Demir Ekholm Faro Galvez Hartig Ilic Jansen Kaya Lindqvist
Moreau Novak Ortega Pohl Quist Roussel Sahin Tanner Ulrich Varga Weller Yilmaz
Zorlu Arden Brandt Cerny Dalton Engel""".split()
SHOW_A = """Silent Northern Broken Golden Hidden Last Crimson Distant Open Quiet
Burning Hollow Iron Paper Salt""".split()
SHOW_B = """Harbor Frontier Signal Empire Orchard Circuit Garden Meridian Station
Archive Lantern Republic Valley Compass""".split()

PREFIX = "http://dbpedia.org/resource/"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=2017)
    ap.add_argument("--people", type=int, default=160)
    ap.add_argument("--series", type=int, default=40)
    ap.add_argument("--out", default="data/reference_kb.txt")
    args = ap.parse_args()
    rng = random.Random(args.seed)

    people = set()
    while len(people) < args.people:
        people.add(f"{rng.choice(FIRST)}_{rng.choice(LAST)}")
    people = sorted(people)
    series = set()
    while len(series) < args.series:
        series.add(f"{rng.choice(SHOW_A)}_{rng.choice(SHOW_B)}_(TV_series)")
    series = sorted(series)

    size = {}
    for p in people:
        size[p] = int(round(10 ** rng.uniform(4.5, 5.3)))  # ~32 KB .. 200 KB
    for s in series:
        size[s] = int(round(10 ** rng.uniform(4.9, 5.5)))  # ~80 KB .. 316 KB

    # Marriages: most people have exactly one spouse, a few have two, some none.
    spouse = []
    pool = people[:]
    rng.shuffle(pool)
    married = pool[: int(len(pool) * 0.8) // 2 * 2]
    for a, b in zip(married[0::2], married[1::2]):
        spouse.append((a, b))
        spouse.append((b, a))
    for a in rng.sample(married, 10):
        b = rng.choice([p for p in people if p != a])
        if (a, b) not in spouse:
            spouse.append((a, b))
            spouse.append((b, a))

    starring = []
    for s in series:
        for actor in rng.sample(people, rng.randint(2, 4)):
            starring.append((s, actor))

    with open(args.out, "w", encoding="utf-8") as f:
        f.write("# Reference knowledge base: people and TV series.\n")
        f.write("# Generated by tools/make_reference_kb.py --seed %d\n\n" % args.seed)
        for e in people:
            f.write(f'"{PREFIX}{e}" type Person\n')
        for e in series:
            f.write(f'"{PREFIX}{e}" type TVSeries\n')
        f.write("\n")
        for e in people + series:
            f.write(f'"{PREFIX}{e}" size {size[e]}\n')
        f.write("\n")
        for a, b in sorted(set(spouse)):
            f.write(f'"{PREFIX}{a}" spouse "{PREFIX}{b}"\n')
        for s, a in sorted(starring):
            f.write(f'"{PREFIX}{s}" starring "{PREFIX}{a}"\n')


if __name__ == "__main__":
    main()
