#!/usr/bin/env python3
"""Regenerates the Article 1 fixture documents under fixtures/.

Spans are located by searching the body text, so edits to the wording only
need the phrase lists below to stay in sync.
"""
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

RANK = {"goal": 0, "composite": 1, "term": 2}


class Doc:
    def __init__(self, id, title, body, kind):
        self.d = {"id": id, "title": title, "body": body, "kind": kind, "annotations": []}
        self.n = 0

    def find(self, phrase, after=0):
        start = self.d["body"].index(phrase, after)
        return start, start + len(phrase)

    def _add(self, span, kind):
        self.n += 1
        a = {"id": f"a{self.n}", "span": {"start": span[0], "end": span[1]}}
        a.update(kind)
        self.d["annotations"].append(a)
        return span

    def term(self, phrase, name, args=(), after=0):
        return self._add(self.find(phrase, after), {"type": "term", "name": name, "args": list(args)})

    def comp(self, connective, first, last):
        return self._add((first[0], last[1]), {"type": "composite", "connective": connective})

    def goal(self, span):
        return self._add(span, {"type": "goal"})

    def finish(self):
        anns = self.d["annotations"]
        anns.sort(key=lambda a: (a["span"]["start"], -a["span"]["end"], RANK[a["type"]], a["id"]))

        def encloses(a, b):
            sa, sb = a["span"], b["span"]
            inside = sa["start"] <= sb["start"] and sb["end"] <= sa["end"]
            return inside and (sa != sb or RANK[a["type"]] < RANK[b["type"]])

        for a in anns:
            a["children"] = []
        for j, b in enumerate(anns):
            parents = [i for i in range(j) if encloses(anns[i], b)]
            if parents:
                anns[parents[-1]]["children"].append(b["id"])
        return self.d


def article():
    s1 = (
        "Where an adult smokes in a motor vehicle while a child is in the vehicle, "
        "the vehicle is in a public place, and the vehicle is not both designed or "
        "adapted for living and actually used as accommodation, the adult may be "
        "given a punishment fine."
    )
    s2 = (
        "An adult who does not smoke, or who has no child in the vehicle, or whose "
        "vehicle is not in a public place, or whose vehicle is designed or adapted "
        "for living and is used as accommodation, must not be given a punishment fine."
    )
    d = Doc("article-1", "Article 1", "Article 1. " + s1 + " " + s2, "legislation")
    x = ["X"]

    b1 = d.d["body"].index(s1)
    adult = d.term("adult", "adult", x, b1)
    smoke = d.term("smokes", "smoke", x, b1)
    child = d.term("a child is in the vehicle", "child_in_vehicle", after=b1)
    public = d.term("the vehicle is in a public place", "vehicle_in_public_place", after=b1)
    designed = d.term("designed or adapted for living", "designed_or_adapted", after=b1)
    used = d.term("used as accommodation", "used_as_accommodation", after=b1)
    fine = d.term("punishment fine", "punishment_fine", x, b1)
    both = d.comp("And", designed, used)
    neg = d.comp("Not", d.find("not both", b1), used)
    c1 = d.comp("And", adult, smoke)
    c2 = d.comp("And", adult, child)
    c3 = d.comp("And", adult, public)
    c4 = d.comp("And", adult, neg)
    d.comp("CondPm", d.find("Where", b1), d.find("fine.", b1))

    b2 = d.d["body"].index(s2)
    adult = d.term("adult", "adult", x, b2)
    smoke = d.term("smoke", "smoke", x, b2)
    child = d.term("child in the vehicle", "child_in_vehicle", after=b2)
    public = d.term("in a public place", "vehicle_in_public_place", after=b2)
    designed = d.term("designed or adapted for living", "designed_or_adapted", after=b2)
    used = d.term("used as accommodation", "used_as_accommodation", after=b2)
    fine = d.term("punishment fine", "punishment_fine", x, b2)
    n1 = d.comp("Not", d.find("does not smoke", b2), smoke)
    n2 = d.comp("Not", d.find("has no child", b2), child)
    n3 = d.comp("Not", d.find("is not in a public place", b2), public)
    both = d.comp("And", designed, used)
    o1 = d.comp("Or", n1, n2)
    o2 = d.comp("Or", n1, n3)
    o3 = d.comp("Or", n1, both)
    d.comp("And", adult, o3)
    d.comp("CondFb", d.find("An adult", b2), d.find("fine.", b2))
    return d.finish()


def query(id, title, body, facts, goal):
    d = Doc(id, title, body, "query")
    for fact in facts:
        fact(d)
    goal(d)
    return d.finish()


def fact(phrase, name, args=()):
    return lambda d: d.term(phrase, name, args)


def negated(outer, phrase, name):
    def add(d):
        inner = d.term(phrase, name)
        d.comp("Not", d.find(outer), inner)
    return add


def deontic(connective, phrase, term_phrase, name, args):
    def add(d):
        span = d.find(phrase)
        d.goal(span)
        d.comp(connective, span, span)
        d.term(term_phrase, name, args, span[0])
    return add


def queries():
    story = "Our client, an adult, was smoking in the car while a child was inside."
    c = ["c"]
    a = ["a"]
    yield query(
        "case-1",
        "Case 1",
        story + " Is the client protected from a fine?",
        [
            fact("an adult", "adult", c),
            fact("smoking", "smoke", c),
            fact("a child was inside", "child_in_vehicle"),
        ],
        deontic("Fb", "protected from a fine", "a fine", "punishment_fine", c),
    )
    yield query(
        "case-2",
        "Case 2",
        story
        + " The car was parked in a public place and was not being used as"
        + " accommodation. Was the officer permitted to issue the fine?",
        [
            fact("an adult", "adult", c),
            fact("smoking", "smoke", c),
            fact("a child was inside", "child_in_vehicle"),
            fact("in a public place", "vehicle_in_public_place"),
            negated("not being used as accommodation", "used as accommodation",
                    "used_as_accommodation"),
        ],
        deontic("Pm", "permitted to issue the fine", "the fine", "punishment_fine", c),
    )
    yield query(
        "test-scenario-1",
        "Test Scenario 1",
        "An adult smokes in a car with a child on board; the car is not in a public"
        " place. Expected: no fine may be given.",
        [
            fact("An adult", "adult", a),
            fact("smokes", "smoke", a),
            fact("a child on board", "child_in_vehicle"),
            negated("not in a public place", "in a public place", "vehicle_in_public_place"),
        ],
        deontic("Fb", "no fine may be given", "fine", "punishment_fine", a),
    )
    yield query(
        "test-scenario-2",
        "Test Scenario 2",
        "An adult smokes in a car with a child on board; the car is in a public place"
        " and was not designed or adapted for living. Expected: a fine may be given.",
        [
            fact("An adult", "adult", a),
            fact("smokes", "smoke", a),
            fact("a child on board", "child_in_vehicle"),
            fact("in a public place", "vehicle_in_public_place"),
            negated("not designed or adapted for living", "designed or adapted for living",
                    "designed_or_adapted"),
        ],
        deontic("Pm", "a fine may be given", "fine", "punishment_fine", a),
    )


def write(path, doc):
    path.write_text(json.dumps(doc, indent=2) + "\n")


def main():
    write(ROOT / "article-1.json", article())
    for q in queries():
        write(ROOT / "queries" / f"{q['id']}.json", q)


if __name__ == "__main__":
    main()
