use vstd::prelude::*;

verus! {

pub open spec fn word_aligned(addr: u64) -> bool {
    addr % 8 == 0
}

pub fn align_down(addr: u64) -> (ret: u64)
    requires addr < 0x1000_0000,
    ensures word_aligned(ret), ret <= addr,
{
    (addr / 8) * 8
}

} // verus!
