"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from weightsys.diagrams import parse_diagram


@st.composite
def oriented_diagrams(draw, max_n=6):
    n = draw(st.integers(0, max_n))
    tokens = [("t", i) for i in range(1, n + 1)] + [("h", i) for i in range(1, n + 1)]
    tokens = draw(st.permutations(tokens))
    ids = draw(st.permutations(list(range(1, n + 1))))
    # scrambled, non-contiguous ids exercise renumbering
    word = " ".join(f"{r}{ids[i - 1] * 7}" for r, i in tokens)
    return parse_diagram(word)


@st.composite
def chord_diagrams(draw, max_n=3):
    n = draw(st.integers(0, max_n))
    tokens = draw(st.permutations([i for i in range(1, n + 1)] * 2))
    return parse_diagram(" ".join(f"c{i}" for i in tokens), oriented=False)
