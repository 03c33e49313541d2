#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "proxmom/solvers.hpp"

namespace proxmom {

// One row per record, 17-significant-digit floats, LF endings:
// solver,seed,k,passes,F_x,F_y,step_norm,residual,beta,chose_extrapolation,
// eps_realized,grad_err_realized
extern const char* const kTraceCsvHeader;

void write_trace_csv(std::ostream& os, const std::string& solver, std::uint64_t seed,
                     const Trace& tr);

// Writes in binary mode so the bytes are identical on every platform.
void write_trace_csv_file(const std::string& path, const std::string& solver, std::uint64_t seed,
                          const Trace& tr);

std::string trace_csv_string(const std::string& solver, std::uint64_t seed, const Trace& tr);

}  // namespace proxmom
