"""Shared test instances."""
from gridtree.model import Network, Node, Orientation

FIG1_DOC = {
    "nodes": [
        {"id": "s1", "kind": "source", "prod": 100},
        {"id": "s2", "kind": "source", "prod": 20},
        {"id": "w1", "kind": "switch", "cap": 60},
        {"id": "w2", "kind": "switch", "cap": 20},
        {"id": "w3", "kind": "switch", "cap": 35},
        {"id": "p1", "kind": "sink", "pow": 50},
        {"id": "p2", "kind": "sink", "pow": 20},
        {"id": "p3", "kind": "sink", "pow": 10},
    ],
    "edges": [["s1", "w1"], ["s1", "p3"], ["s2", "w3"], ["w1", "p1"],
              ["w2", "w1"], ["w2", "w3"], ["w3", "p2"]],
    "numbering": ["s1", "s2", "w1", "w2", "w3", "p1", "p2", "p3"],
}

FIG1_ORIENTATIONS = {
    "b": [("s1", "w1"), ("s1", "p3"), ("s2", "w3"), ("w1", "p1"), ("w3", "p2"),
          ("w1", "w2"), ("w3", "w2")],
    "c": [("w1", "s1"), ("s1", "p3"), ("s2", "w3"), ("w1", "p1"), ("w2", "w1"),
          ("w3", "w2"), ("w3", "p2")],
    "d": [("s1", "w1"), ("s1", "p3"), ("s2", "w3"), ("w1", "p1"), ("w1", "w2"),
          ("w2", "w3"), ("w3", "p2")],
    "e": [("s1", "w1"), ("s1", "p3"), ("s2", "w3"), ("w1", "p1"), ("w2", "w1"),
          ("w3", "w2"), ("p2", "w3")],
    "f": [("s1", "w1"), ("s1", "p3"), ("s2", "w3"), ("w1", "p1"), ("w2", "w1"),
          ("w2", "w3"), ("w3", "p2")],
}


def fig1():
    from gridtree.model import network_from_dict
    return network_from_dict(FIG1_DOC)


def fig1_orientation(net, label):
    return Orientation(net, FIG1_ORIENTATIONS[label])


def fig1_pow15():
    """Sample network with the demand of p2 lowered to 15 (worked DP examples)."""
    return fig1().with_values({"p2": 15})


def pair(prod, pw):
    return Network([Node("s", "source", prod), Node("p", "sink", pw)], [("s", "p")])
