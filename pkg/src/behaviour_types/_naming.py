import re
from itertools import product

ACTION_RE = re.compile(r"^[A-Za-z0-9_]+$")
STATE_RE = re.compile(r"^[A-Za-z0-9_.*()]+$")


def check_action(name):
    if not isinstance(name, str) or not ACTION_RE.match(name):
        raise ValueError(f"invalid action name {name!r}")
    return name


def check_state(name):
    if not isinstance(name, str) or not STATE_RE.match(name):
        raise ValueError(f"invalid state name {name!r}")
    return name


def interaction(actions):
    """Normalise an iterable of action names into a non-empty frozenset."""
    if isinstance(actions, str):
        actions = actions.replace(",", " ").split()
    label = frozenset(check_action(a) for a in actions)
    if not label:
        raise ValueError("interactions must be non-empty")
    return label


def label_key(label):
    return tuple(sorted(label))


def show_label(label):
    return "{" + ",".join(sorted(label)) + "}"


def tuple_name(parts):
    return ".".join(parts)


def product_names(*factors):
    """Map every tuple of the cartesian product of ``factors`` to a state name.

    Names are dotted (``p0.q0``); factors whose names already contain dots
    are parenthesised when flat names would collide.
    """
    tuples = list(product(*factors))
    names = {t: ".".join(t) for t in tuples}
    if len(set(names.values())) == len(tuples):
        return names
    wrap = lambda s: f"({s})" if "." in s else s
    names = {t: ".".join(wrap(s) for s in t) for t in tuples}
    if len(set(names.values())) != len(tuples):
        raise ValueError("cannot build unique product state names")
    return names
