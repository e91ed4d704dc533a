pub fn MAX_PHYADDR(max_width:u64) -> ( ret : u64)
  requires 32 <= max_width <= 52,
  ensures ret < 0x10_0000_0000_0000u64,
{
  assert(1u64 << max_width > 1) by(bit_vector)
    requires 32 <= max_width <= 52;
  assert(1u64 << max_width <= 0x10_0000_0000_0000u64) by(bit_vector)
    requires 32 <= max_width <= 52;
  (1u64 << max_width) - 1u64
}
