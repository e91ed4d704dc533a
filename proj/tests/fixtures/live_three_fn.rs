use vstd::prelude::*;

verus! {

pub open spec fn spec_add(a: int, b: int) -> int {
    a + b
}

proof fn lemma_add_commutes(a: int, b: int)
    ensures spec_add(a, b) == spec_add(b, a),
{
}

pub fn checked_add(a: u32, b: u32) -> (r: u64)
    ensures r == a + b,
{
    a as u64 + b as u64
}

} // verus!
