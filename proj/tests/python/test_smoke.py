import hashlib

import pytest

import risecure


def test_hashes_match_hashlib():
    for msg in (b"", b"abc", bytes(range(200))):
        assert risecure.sha3_256(msg) == hashlib.sha3_256(msg).digest()
        assert risecure.sha2_256(msg) == hashlib.sha256(msg).digest()


def test_enroll_and_sample_round_trip():
    system = risecure.new_system("sram", "bch", seed=4)
    helper = risecure.enroll(system, 9, seed=1)
    assert helper["code_id"] == "bch-127-36-15"
    outer = "00112233445566778899aabbccddeeff"
    a = risecure.sample(system, 9, "hashed", helper, outer, seed=10)
    b = risecure.sample(system, 9, "hashed", helper, outer, seed=11)
    assert a == b
    assert len(a) == 64
    r2 = risecure.sample(system, 9, "corrected", helper, seed=12)
    r2_bits = "".join(f"{int(c, 16):04b}" for c in r2)[:127]
    c_bits = "".join(f"{int(c, 16):04b}" for c in outer)
    msg = r2_bits + c_bits
    msg += "0" * (-len(msg) % 8)
    assert hashlib.sha3_256(int(msg, 2).to_bytes(len(msg) // 8, "big")).hexdigest() == a


def test_domain_errors_raise():
    system = risecure.new_system()
    with pytest.raises(ValueError):
        risecure.sample(system, 1, "hashed")
    with pytest.raises(ValueError):
        risecure.new_system(code="golay")


def test_small_attack_and_bench():
    rep = risecure.attack(train=2000, test=500, epochs=200, seed=3)
    assert rep["raw"]["test_accuracy"] > 0.85
    assert 0.4 < rep["hashed"]["test_accuracy"] < 0.6
    bench = risecure.bench(risecure.new_system(seed=2), batches=[1, 4], repeats=2)
    assert [row["batch"] for row in bench["rows"]] == [1, 4]


def test_selftest_passes():
    results = risecure.selftest()
    assert results and all(r["passed"] for r in results)
