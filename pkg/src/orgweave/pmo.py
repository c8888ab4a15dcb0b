"""The workshop fixture: a small product manufacturing organization.

Three kinds of participants run one line together.  A workshop person
designs, programs, and supplies material; a program producer turns a
program into a machine image; a machine manufactures pieces and clears
its waste.  The module builds the whole society document in code and
can write it out as the shipped fixture files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .cpn import ATOM, IN, OUT, Arc, ColorSet, Net, Place, Token, Transition
from .org import (
    HUMAN_INTERFACE,
    ROBOT_INTERFACE,
    SOFTWARE,
    AgentSpec,
    Organization,
    Role,
    pair,
)
from .specio import ProcedureSpec, SocietySpec, TemplateSpec, serialize_spec

COLORSETS = tuple(
    ColorSet(name, ATOM)
    for name in ("Dem", "S", "Pg", "I", "Rm", "Pc", "Wst", "Stock"))

ROLES = (
    Role("D", "DM", "n"),
    Role("P", "PM", "k"),
    Role("PP", "PPM", "i"),
    Role("W", "WM", "i"),
    Role("M", "MM", "p"),
)

RELATION = frozenset({
    pair("D", "P"), pair("P", "W"), pair("P", "PP"),
    pair("M", "W"), pair("M", "PP"),
})

PRECEDENCE = (("Des", "P"), ("P", "G"), ("G", "Ma"), ("Sup", "Ma"), ("Ma", "C"))


@dataclass(frozen=True)
class PmoFixture:
    """The society document plus the drivers a scripted run needs."""

    spec: SocietySpec
    answers: dict
    precedence: tuple


def global_task() -> Net:
    """The shared manufacturing task, with roles as actors."""
    return Net(
        "line",
        colorsets=COLORSETS,
        places=[
            Place("dem", "Dem", (Token("Dem", "d1"),)),
            Place("s", "S"),
            Place("pg", "Pg"),
            Place("i", "I"),
            Place("stock", "Stock", (Token("Stock", "m1"),)),
            Place("rm", "Rm"),
            Place("pc", "Pc"),
            Place("wst", "Wst"),
        ],
        transitions=[
            Transition("Des", "D", "Des"),
            Transition("P", "P", "P"),
            Transition("G", "PP", "G"),
            Transition("Sup", "W", "Sup"),
            Transition("Ma", "M", "Ma"),
            Transition("C", "M", "C"),
        ],
        arcs=[
            Arc("dem", "Des", IN, "d"),
            Arc("s", "Des", OUT, "x"),
            Arc("s", "P", IN, "x"),
            Arc("pg", "P", OUT, "y"),
            Arc("pg", "G", IN, "y"),
            Arc("i", "G", OUT, "z"),
            Arc("stock", "Sup", IN, "m"),
            Arc("rm", "Sup", OUT, "r"),
            Arc("i", "Ma", IN, "z"),
            Arc("rm", "Ma", IN, "r"),
            Arc("pc", "Ma", OUT, "p"),
            Arc("wst", "Ma", OUT, "w"),
            Arc("wst", "C", IN, "w"),
        ],
    )


def organization() -> Organization:
    return Organization(
        "workshop",
        "A manufacturing line run by designers, programmers, workers, "
        "program producers, and machines.",
        ROLES,
        RELATION,
        global_task(),
    )


def agents() -> tuple:
    return (
        AgentSpec("WP", HUMAN_INTERFACE, ("D", "P", "W"), "Intelligent",
                  "Workshop person covering design, programming, and supply."),
        AgentSpec("PP", SOFTWARE, ("PP",), "",
                  "Program producer compiling programs into machine images."),
        AgentSpec("M", ROBOT_INTERFACE, ("M",), "Procedural",
                  "Manufacturing machine."),
    )


def procedures() -> dict:
    return {
        "WP": (
            ProcedureSpec("Des", "Design",
                          prompt="Design a product answering the pending demand."),
            ProcedureSpec("P", "Program",
                          prompt="Write the machining program for the design."),
            ProcedureSpec("Sup", "Supply",
                          prompt="Feed raw material from the stock to the machine."),
        ),
        "PP": (
            ProcedureSpec("G", "Generate image",
                          template=TemplateSpec("z", "I", "im({y})")),
        ),
        "M": (
            ProcedureSpec("Ma", "Manufacture",
                          script=("LOAD_IMAGE {z}", "FEED {r}", "MANUFACTURE")),
            ProcedureSpec("C", "Clear waste", script=("CLEAR",)),
        ),
    }


def build_pmo() -> PmoFixture:
    spec = SocietySpec(
        "pmo",
        "Product manufacturing line with one workshop person, one program "
        "producer, and one machine.",
        COLORSETS,
        organization(),
        agents(),
        procedures(),
    )
    answers = {
        "Des": {"x": Token("S", "s1")},
        "P": {"y": Token("Pg", "pg1")},
        "Sup": {"r": Token("Rm", "rm1")},
    }
    return PmoFixture(spec, answers, PRECEDENCE)


def answers_json(fixture: PmoFixture) -> str:
    plain = {
        name: {label: str(token.value) for label, token in outputs.items()}
        for name, outputs in fixture.answers.items()
    }
    return json.dumps(plain, indent=2) + "\n"


def write_fixtures(directory) -> list:
    """Write the society and answer files; returns the paths written."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    fixture = build_pmo()
    society = directory / "pmo.society.json"
    society.write_text(serialize_spec(fixture.spec))
    answers = directory / "answers.json"
    answers.write_text(answers_json(fixture))
    return [society, answers]
