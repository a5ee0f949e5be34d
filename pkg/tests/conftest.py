import pytest

from priorlex.swn_store import SenseProfile, parse_swn_file

# The five adjective senses of "cold" with all score combinations
# (plain, mixed, and both-zero), handy for exercising every formula.
COLD_POS = (0.0, 0.0, 0.0, 0.125, 0.625)
COLD_NEG = (0.75, 0.75, 0.0, 0.375, 0.0)

SWN_SAMPLE = """\
# test resource v3.0
# pos\tid\tposscore\tnegscore\tterms\tgloss
a\t01207406\t0\t0.75\tcold#1\thaving a low temperature
a\t01212558\t0\t0.75\tcold#2\textended meanings
a\t01024433\t0\t0\tcold#3\tsexually unresponsive
a\t02443231\t0.125\t0.375\tcold#4\tso intense as to be almost uncontrollable
a\t01695706\t0.625\t0\tcold#5\tfeeling or showing no enthusiasm
n\t04215444\t0\t0\tzilch#1 nix#1\ta quantity of no importance
v\t00095747\t0.25\t0\tbetter#1 improve#1\tto make better
r\t00085811\t0.5\t0.125\twell#1\tin a good or proper manner
a\t01123148\t0.625\t0\tgood#1\thaving desirable qualities
a\t01052248\t0\t0.25\tbetter#1\tmore than half
"""


@pytest.fixture
def cold_profile():
    return SenseProfile("cold#a", COLD_POS, COLD_NEG)


@pytest.fixture
def sample_swn(tmp_path):
    path = tmp_path / "swn.txt"
    path.write_text(SWN_SAMPLE, encoding="utf-8")
    return path


@pytest.fixture
def sample_store(sample_swn):
    return parse_swn_file(sample_swn)
