import numpy as np
import pytest

import oracle
from lifesym import canon
from lifesym.census import canonical_code, extract_objects, stabilize


def cells_of(*rows):
    return np.array(sorted(oracle.drawing(*rows)), dtype=np.int64)


def code_of(*rows):
    return canonical_code(extract_objects(stabilize(cells_of(*rows)))[0])


# codes as published in the public soup census for these objects
KNOWN = {
    "block": (("oo", "oo"), "xs4_33"),
    "beehive": ((".oo.", "o..o", ".oo."), "xs6_696"),
    "boat": (("oo.", "o.o", ".o."), "xs5_253"),
    "ship": (("oo.", "o.o", ".oo"), "xs6_356"),
    "loaf": ((".oo.", "o..o", ".o.o", "..o."), "xs7_2596"),
    "tub": ((".o.", "o.o", ".o."), "xs4_252"),
    "pond": ((".oo.", "o..o", "o..o", ".oo."), "xs8_6996"),
    "long boat": ((".o..", "o.o.", ".o.o", "..oo"), "xs7_25ac"),
    "barge": ((".o..", "o.o.", ".o.o", "..o."), "xs6_25a4"),
    "mango": ((".oo..", "o..o.", ".o..o", "..oo."), "xs8_69ic"),
    "blinker": (("ooo",), "xp2_7"),
    "toad": ((".ooo", "ooo."), "xp2_7e"),
    "beacon": (("oo..", "oo..", "..oo", "..oo"), "xp2_318c"),
    "glider": ((".o.", "..o", "ooo"), "xq4_153"),
}


@pytest.mark.parametrize("name", sorted(KNOWN))
def test_known_codes_and_names(name):
    rows, code = KNOWN[name]
    t = code_of(*rows)
    assert t.code == code
    assert t.name == name


def test_ship_tie_code():
    t = code_of("oo....", "o.o...", ".oo...", "...oo.", "...o.o", "....oo")
    assert t.code == "xs12_g8o653z11" and t.name == "ship-tie"


def test_all_32_glider_variants_share_one_code():
    cells = oracle.drawing(".o.", "..o", "ooo")
    phases = []
    for _ in range(4):
        phases.append(np.array(sorted(cells)))
        cells = oracle.life_step(cells)
    codes = set()
    for ph in phases:
        for m in canon.SYMMETRIES:
            objs = extract_objects(stabilize(ph @ m.T))
            assert len(objs) == 1
            codes.add(canonical_code(objs[0]).code)
    assert codes == {"xq4_153"}


def test_boat_and_mirror_agree():
    boat = cells_of("oo.", "o.o", ".o.")
    mirror = boat * np.array([-1, 1])
    assert canon.minimal_encoding([boat]) == canon.minimal_encoding([mirror])


def test_encode_decode_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(200):
        cells = np.argwhere(rng.random((rng.integers(1, 12), rng.integers(1, 12))) < 0.4)[:, ::-1]
        if len(cells) == 0:
            continue
        assert canon.shape_key(canon.decode(canon.encode(cells))) == canon.shape_key(cells)


def test_name_table_covers_reference_ranks():
    names = set(canon.name_table().values())
    ranks = canon.reference_ranks()
    assert len(ranks) == 19
    assert set(ranks) <= names
    assert ranks["block"] == 1 and ranks["blinker"] == 2 and ranks["loop"] == 49


@pytest.mark.parametrize("name", ["integral sign", "half-bakery", "loop", "boat-tie"])
def test_decoded_table_entries_are_still_lifes(name):
    cells = canon.decode(canon.code_for_name(name).split("_", 1)[1])
    s = {(int(x), int(y)) for x, y in cells}
    assert oracle.life_step(s) == s


def test_pulsar_entry_is_period_3():
    cells = canon.decode(canon.code_for_name("pulsar").split("_", 1)[1])
    s = {(int(x), int(y)) for x, y in cells}
    a = oracle.life_step(s)
    b = oracle.life_step(a)
    assert a != s and oracle.life_step(b) == s
