"""Small hand-built instances."""
from fractions import Fraction

from sharplll.lll import Event, LLLInstance, Variable


def uniform(vid, q):
    return Variable(vid, tuple(range(q)), tuple(Fraction(1, q) for _ in range(q)))


def two_event():
    """X uniform on {0, 1, 2}; E_0 iff X = 1, E_1 iff X = 2.  p = 1/3, d = 1."""
    return LLLInstance([uniform(0, 3)], [Event(0, (0,), ((1,),)), Event(1, (0,), ((2,),))])


def triangle_rank3():
    """Three events on one rank-3 variable with domain 4; E_i iff X = i + 1."""
    return LLLInstance([uniform(0, 4)], [Event(i, (0,), ((i + 1,),)) for i in range(3)])


def equal_pair():
    """E occurs iff X = Y, both uniform binary."""
    return LLLInstance([uniform(0, 2), uniform(1, 2)], [Event(0, (0, 1), ((0, 0), (1, 1)))])
