#include "proxmom/trace_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "proxmom/format.hpp"

namespace proxmom {

const char* const kTraceCsvHeader =
    "solver,seed,k,passes,F_x,F_y,step_norm,residual,beta,chose_extrapolation,"
    "eps_realized,grad_err_realized";

void write_trace_csv(std::ostream& os, const std::string& solver, std::uint64_t seed,
                     const Trace& tr) {
  os << kTraceCsvHeader << '\n';
  for (const IterationRecord& r : tr.records) {
    os << solver << ',' << seed << ',' << r.k << ',' << format_sig17(r.passes) << ','
       << format_sig17(r.F_x) << ',' << format_sig17(r.F_y) << ','
       << format_sig17(r.step_norm) << ',' << format_sig17(r.residual) << ','
       << format_sig17(r.beta) << ',' << (r.chose_extrapolation ? 1 : 0) << ','
       << format_sig17(r.eps_realized) << ',' << format_sig17(r.grad_err_realized) << '\n';
  }
}

void write_trace_csv_file(const std::string& path, const std::string& solver,
                          std::uint64_t seed, const Trace& tr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("write_trace_csv_file: cannot open " + path);
  write_trace_csv(out, solver, seed, tr);
  if (!out) throw std::invalid_argument("write_trace_csv_file: write failed for " + path);
}

std::string trace_csv_string(const std::string& solver, std::uint64_t seed, const Trace& tr) {
  std::ostringstream os;
  write_trace_csv(os, solver, seed, tr);
  return os.str();
}

}  // namespace proxmom
