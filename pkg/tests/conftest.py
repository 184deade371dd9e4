import hypothesis
from hypothesis import strategies as st

from nchilb import forest_core as fc

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.load_profile("default")


@st.composite
def small_forests(draw, max_m=3, max_n=3, max_d=5):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    d = draw(st.integers(0, max_d))
    forests = fc.enumerate_forests(m, n, d)
    return draw(st.sampled_from(forests))
