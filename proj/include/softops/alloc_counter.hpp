#pragma once

#include <cstddef>

// Byte counters fed by the replaced global operator new/delete.
namespace softops::alloc {

std::size_t current_bytes();
std::size_t peak_bytes();
// Sets the peak to the current live byte count.
void reset_peak();

}  // namespace softops::alloc
