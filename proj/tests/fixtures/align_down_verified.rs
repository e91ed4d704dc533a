use vstd::prelude::*;

verus! {

broadcast use vstd::arithmetic::mul::group_mul_properties;

proof fn lemma_div_mul_le(a: u64, b: u64)
    requires b > 0,
    ensures (a / b) * b <= a,
{
    assert((a / b) * b <= a) by(nonlinear_arith);
}

proof fn lemma_mod_mul_zero(a: u64, b: u64)
    requires b > 0,
    ensures ((a / b) * b) % b == 0,
{
    assert(((a / b) * b) % b == 0) by(nonlinear_arith);
}

pub open spec fn word_aligned(addr: u64) -> bool {
    addr % 8 == 0
}

pub fn align_down(addr: u64) -> (ret: u64)
    requires addr < 0x1000_0000,
    ensures word_aligned(ret), ret <= addr,
{
    proof {
        lemma_div_mul_le(addr, 8);
        assert(word_aligned((addr / 8) * 8)) by {
            assert(((addr / 8) * 8) % 8 == 0) by(nonlinear_arith);
        };
    }
    assert(addr / 8 <= addr);
    assert(8u64 > 0);
    assert(word_aligned((addr / 8) * 8));
    assert((addr / 8) * 8 <= addr);
    (addr / 8) * 8
}

} // verus!
