import pytest
from hypothesis import given, strategies as st

from hurewicz_kit import prime_coding as pc

from oracles import all_seqs, j_code, prime, sieve_primes


def test_first_primes():
    assert pc.nth_prime(0) == 2
    assert pc.nth_prime(2) == 5
    assert pc.nth_prime(5) == 13


def test_primes_against_sieve():
    expected = sieve_primes(10_000)
    assert [pc.nth_prime(i) for i in range(len(expected))] == expected


def test_encode_examples():
    assert pc.encode(()) == 0
    assert pc.encode((1,)) == 4
    assert pc.encode((4, 1)) == 288
    assert pc.encode((4, 1)) == j_code((4, 1))


def test_decode_examples():
    assert pc.decode(0) == ()
    assert pc.decode(36) == (1, 1)
    assert pc.decode(10) is None  # 2*5 skips 3
    assert pc.decode(15) is None  # does not start at 2
    assert pc.decode(7) is None


def test_encode_matches_direct_product():
    for s in all_seqs(4, 5):
        assert pc.encode(s) == j_code(s)


def test_injective_and_round_trip_small():
    seen = {}
    for s in all_seqs(3, 6):
        c = pc.encode(s)
        assert c not in seen
        seen[c] = s
        assert pc.decode(c) == s


def test_extension_monotone():
    for s in all_seqs(4, 8):
        if not s:
            continue
        for n in range(8):
            assert pc.encode(s + (n,)) > pc.encode(s)


@given(st.lists(st.integers(min_value=0, max_value=60), max_size=6))
def test_round_trip_random(entries):
    s = tuple(entries)
    assert pc.decode(pc.encode(s)) == s


def test_is_code():
    codes = {j_code(s) for s in all_seqs(4, 9)}  # length-5 codes start at 2310
    for n in range(600):
        assert pc.is_code(n) == (n in codes)


def test_make_code_value_canonical():
    small = pc.make_code_value((1, 1, 1))
    assert small == 900 and isinstance(small, int)
    # an entry of ~2^470 pushes the value far past the materialization cutoff
    big_entry = 2**5 * 3**289 * 5**2
    big = pc.make_code_value((1, 1, big_entry, 1))
    assert isinstance(big, pc.SymbolicCode)
    assert pc.decode(big) == (1, 1, big_entry, 1)
    assert big == pc.make_code_value_sparse(4, ((2, big_entry),))
    assert hash(big) == hash(pc.make_code_value_sparse(4, ((2, big_entry),)))
    assert big != pc.make_code_value_sparse(4, ((2, big_entry - 1),))


def test_symbolic_entry_access():
    v = pc.make_code_value_sparse(5, ((1, 4), (3, 2**5 * 3**289 * 5**2)))
    assert isinstance(v, pc.SymbolicCode)
    assert v.entry(0) == 1 and v.entry(1) == 4 and v.entry(4) == 1
    assert len(v.seq()) == 5


def test_make_code_value_cutoff():
    # explicit: (e,) codes to 2^(e+1); the cutoff sits at MATERIALIZE_BITS bits
    low = pc.make_code_value((4000,))
    high = pc.make_code_value((5000,))
    assert isinstance(low, int) and low == 2**4001
    assert isinstance(high, pc.SymbolicCode)


def test_scaled_log_sign():
    assert pc.scaled_log_sign([(2, 2), (-1, 3)]) == 1  # ln(4/3) > 0
    assert pc.scaled_log_sign([(-3, 2), (1, 3)]) == -1  # ln(3/8) < 0
    assert pc.scaled_log_sign([(5, 2), (-5, 2)]) == 0
    assert pc.scaled_log_sign([]) == 0


def test_code_value_cmp_matches_int_order():
    vals = sorted(j_code(s) for s in all_seqs(3, 5) if s)
    for a, b in zip(vals, vals[1:]):
        assert pc.code_value_cmp(a, b) == -1
        assert pc.code_value_cmp(b, a) == 1
        assert pc.code_value_cmp(a, a) == 0


def test_code_value_cmp_symbolic():
    e1 = 2**2 * 3**37 * 5**2
    e2 = 2**5 * 3**37 * 5**2
    v1 = pc.make_code_value((1, 1, e1, 1))
    v2 = pc.make_code_value((1, 1, e2, 1))
    assert isinstance(v1, pc.SymbolicCode) and isinstance(v2, pc.SymbolicCode)
    # larger exponent on the same prime: strictly larger value
    assert pc.code_value_cmp(v1, v2) == -1
    assert pc.code_value_cmp(v2, v1) == 1
    # int vs symbolic: the factored side is past the cutoff, hence larger
    assert pc.code_value_cmp(900, v1) == -1
    assert pc.code_value_cmp(v1, 900) == 1


def test_factored_str():
    assert pc.factored_str(4) == "2^2"
    assert pc.factored_str(288) == "2^5·3^2"
    assert pc.factored_str(0) == "0"


def test_render_value_suppresses_huge_decimals():
    big = pc.make_code_value((4000, 4000))
    text = pc.render_value(big)
    assert "decimal suppressed" in text and "digits" in text


def test_encode_rejects_negatives_and_symbolic():
    with pytest.raises(ValueError):
        pc.encode((-1,))
    from hurewicz_kit.base import CapacityError

    sym = pc.make_code_value((5000,))
    with pytest.raises(CapacityError):
        pc.encode((sym,))


def test_code_value_cmp_near_threshold_is_exact():
    # a factored value one entry past the cutoff against integers straddling
    # it: the comparison materializes and decides exactly
    sym = pc.make_code_value((4100,))  # 2^4101, just past the cutoff
    assert isinstance(sym, pc.SymbolicCode)
    assert pc.code_value_cmp(2**4101 - 1, sym) == -1
    assert pc.code_value_cmp(2**4101 + 1, sym) == 1
    assert pc.code_value_cmp(sym, 2**4101 - 1) == 1
    assert pc.code_value_cmp(sym, sym) == 0


def test_horizon_error_reports_needed_index():
    from hurewicz_kit.base import HorizonError
    from hurewicz_kit import departure as dep
    from hurewicz_kit.alphabet import PointPrefix

    try:
        dep.apply(dep.BranchIndex((), (0,)), PointPrefix.from_entries((1,)))
    except HorizonError as exc:
        assert exc.required_index == 2
    else:
        raise AssertionError("expected a horizon error")
