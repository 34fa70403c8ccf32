#pragma once
// Step functions on a Vilenkin group.
//
// A StepFunction with window [lo, hi] is supported on the ball U_lo and
// constant on cosets of U_hi.  Cells are packed base-p indices over the
// digits at lo+1 .. hi, most significant digit first, so ascending index
// order equals ascending lambda order of the cell representatives.  All
// operations below are exact on the cell level; no discretisation error
// is introduced anywhere.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vilenkin/group.hpp"

namespace vilenkin {

class StepFunction {
 public:
  using Coeff = std::complex<double>;
  using Cell = std::uint64_t;
  using Table = std::vector<std::pair<Cell, Coeff>>;

  StepFunction(int p, Side side, std::int32_t lo, std::int32_t hi)
      : modulus_(p), side_(side), lo_(lo), hi_(hi) {
    require_modulus(p);
    if (lo > hi) throw std::domain_error("window requires lo <= hi");
    if (width() > 62) throw std::domain_error("window too wide");
    (void)ipow(static_cast<std::uint64_t>(p), width());  // overflow guard
  }

  static StepFunction zero(int p, Side side, std::int32_t lo = 0, std::int32_t hi = 0) {
    return StepFunction(p, side, lo, hi);
  }

  static StepFunction indicator(const CosetId& cell) {
    StepFunction f(cell.modulus(), cell.side(), cell.window_lo(), cell.window_hi());
    Cell idx = 0;
    for (auto d : cell.digits()) idx = idx * static_cast<Cell>(f.modulus_) + d;
    f.table_.emplace_back(idx, Coeff{1.0, 0.0});
    return f;
  }

  // table must map distinct cells to coefficients; zero entries are dropped.
  static StepFunction from_cells(int p, Side side, std::int32_t lo, std::int32_t hi,
                                 Table table) {
    StepFunction f(p, side, lo, hi);
    std::sort(table.begin(), table.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const Cell span = f.span();
    bool first = true;
    Cell prev = 0;
    for (auto& [idx, v] : table) {
      if (idx >= span) throw std::domain_error("cell index outside window");
      if (!first && prev == idx) throw std::domain_error("duplicate cell");
      first = false;
      prev = idx;
      if (v != Coeff{}) f.table_.emplace_back(idx, v);
    }
    return f;
  }

  int modulus() const { return modulus_; }
  Side side() const { return side_; }
  std::int32_t window_lo() const { return lo_; }
  std::int32_t window_hi() const { return hi_; }
  int width() const { return static_cast<int>(hi_ - lo_); }
  Cell span() const { return ipow(static_cast<std::uint64_t>(modulus_), width()); }
  const Table& cells() const { return table_; }
  bool is_zero() const { return table_.empty(); }
  double cell_measure() const { return p_pow(modulus_, -hi_); }

  std::vector<std::uint8_t> cell_digits(Cell idx) const {
    std::vector<std::uint8_t> d(static_cast<std::size_t>(width()));
    for (int t = width() - 1; t >= 0; --t) {
      d[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(idx % modulus_);
      idx /= static_cast<Cell>(modulus_);
    }
    return d;
  }

  CosetId cell_id(Cell idx) const {
    return CosetId(modulus_, side_, lo_, hi_, cell_digits(idx));
  }

  GroupElement cell_representative(Cell idx) const { return cell_id(idx).representative(); }

  // Packed index of the cell containing x; digits beyond hi are irrelevant
  // to cell membership and ignored.  Returns false if x falls outside U_lo.
  bool locate(const GroupElement& x, Cell& idx) const {
    if (x.modulus() != modulus_ || x.side() != side_)
      throw std::domain_error("element/function mismatch");
    for (const auto& [j, v] : x.digits())
      if (j <= lo_ && v != 0) return false;
    idx = 0;
    for (std::int32_t j = lo_ + 1; j <= hi_; ++j)
      idx = idx * static_cast<Cell>(modulus_) + static_cast<Cell>(x.digit(j));
    return true;
  }

  Coeff coeff(Cell idx) const {
    auto it = std::lower_bound(table_.begin(), table_.end(), idx,
                               [](const auto& e, Cell k) { return e.first < k; });
    return (it != table_.end() && it->first == idx) ? it->second : Coeff{};
  }

  Coeff evaluate(const GroupElement& x) const {
    Cell idx;
    if (!locate(x, idx)) return {};
    return coeff(idx);
  }

  // Exact re-representation on a wider window; values are unchanged.
  StepFunction refine(std::int32_t lo, std::int32_t hi) const {
    if (lo > lo_ || hi < hi_) throw std::domain_error("refine must widen the window");
    if (lo == lo_ && hi == hi_) return *this;
    StepFunction out(modulus_, side_, lo, hi);
    const Cell split = ipow(static_cast<std::uint64_t>(modulus_), static_cast<int>(hi - hi_));
    out.table_.reserve(table_.size() * static_cast<std::size_t>(split));
    for (const auto& [idx, v] : table_)
      for (Cell s = 0; s < split; ++s) out.table_.emplace_back(idx * split + s, v);
    return out;
  }

  friend std::pair<StepFunction, StepFunction> window_align(const StepFunction& f,
                                                            const StepFunction& g) {
    if (f.modulus_ != g.modulus_ || f.side_ != g.side_)
      throw std::domain_error("mismatched functions");
    const std::int32_t lo = std::min(f.lo_, g.lo_), hi = std::max(f.hi_, g.hi_);
    return {f.refine(lo, hi), g.refine(lo, hi)};
  }

  StepFunction scale(Coeff c) const {
    StepFunction out(modulus_, side_, lo_, hi_);
    if (c == Coeff{}) return out;
    out.table_.reserve(table_.size());
    for (const auto& [idx, v] : table_) out.table_.emplace_back(idx, c * v);
    return out;
  }

  // (T_h f)(x) = f(x - h); an exact isometry.
  StepFunction translate(const GroupElement& h) const {
    if (h.modulus() != modulus_ || h.side() != side_)
      throw std::domain_error("element/function mismatch");
    if (h.is_zero()) return *this;
    const std::int32_t lo = std::min(lo_, h.min_index() - 1);
    StepFunction out(modulus_, side_, lo, hi_);
    out.table_.reserve(table_.size());
    for (const auto& [idx, v] : table_) {
      Cell nidx;
      out.locate(add(cell_representative(idx), h), nidx);
      out.table_.emplace_back(nidx, v);
    }
    std::sort(out.table_.begin(), out.table_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  // Composition with the shift automorphism: result(x) = f(A^k x) (B^k on the
  // dual side).  Window moves by k, packed cell indices are unchanged.
  StepFunction window_shift(int k) const {
    StepFunction out(modulus_, side_, lo_ + k, hi_ + k);
    out.table_ = table_;
    return out;
  }

  // Unitary dilation (D^k f)(x) = p^{k/2} f(A^k x).
  StepFunction dilate(int k) const {
    return window_shift(k).scale(std::pow(static_cast<double>(modulus_), 0.5 * k));
  }

  friend StepFunction operator+(const StepFunction& a, const StepFunction& b) {
    auto [f, g] = window_align(a, b);
    StepFunction out(f.modulus_, f.side_, f.lo_, f.hi_);
    auto ia = f.table_.begin(), ea = f.table_.end();
    auto ib = g.table_.begin(), eb = g.table_.end();
    while (ia != ea || ib != eb) {
      if (ib == eb || (ia != ea && ia->first < ib->first)) {
        out.table_.push_back(*ia++);
      } else if (ia == ea || ib->first < ia->first) {
        out.table_.push_back(*ib++);
      } else {
        const Coeff v = ia->second + ib->second;
        if (v != Coeff{}) out.table_.emplace_back(ia->first, v);
        ++ia;
        ++ib;
      }
    }
    return out;
  }

  friend StepFunction operator-(const StepFunction& a, const StepFunction& b) {
    return a + b.scale({-1.0, 0.0});
  }

  // Pointwise product.
  friend StepFunction operator*(const StepFunction& a, const StepFunction& b) {
    auto [f, g] = window_align(a, b);
    StepFunction out(f.modulus_, f.side_, f.lo_, f.hi_);
    auto ia = f.table_.begin(), ea = f.table_.end();
    auto ib = g.table_.begin(), eb = g.table_.end();
    while (ia != ea && ib != eb) {
      if (ia->first < ib->first) {
        ++ia;
      } else if (ib->first < ia->first) {
        ++ib;
      } else {
        const Coeff v = ia->second * ib->second;
        if (v != Coeff{}) out.table_.emplace_back(ia->first, v);
        ++ia;
        ++ib;
      }
    }
    return out;
  }

  StepFunction conjugate() const {
    StepFunction out(modulus_, side_, lo_, hi_);
    out.table_.reserve(table_.size());
    for (const auto& [idx, v] : table_) out.table_.emplace_back(idx, std::conj(v));
    return out;
  }

  friend Coeff inner_product(const StepFunction& a, const StepFunction& b) {
    auto [f, g] = window_align(a, b);
    Coeff acc{};
    auto ia = f.table_.begin(), ea = f.table_.end();
    auto ib = g.table_.begin(), eb = g.table_.end();
    while (ia != ea && ib != eb) {
      if (ia->first < ib->first) {
        ++ia;
      } else if (ib->first < ia->first) {
        ++ib;
      } else {
        acc += ia->second * std::conj(ib->second);
        ++ia;
        ++ib;
      }
    }
    return acc * f.cell_measure();
  }

  double norm_sq() const {
    double acc = 0.0;
    for (const auto& [idx, v] : table_) acc += std::norm(v);
    return acc * cell_measure();
  }
  double norm() const { return std::sqrt(norm_sq()); }

  Coeff integral() const {
    Coeff acc{};
    for (const auto& [idx, v] : table_) acc += v;
    return acc * cell_measure();
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& [idx, v] : table_) m = std::max(m, std::abs(v));
    return m;
  }

  friend double max_abs_diff(const StepFunction& a, const StepFunction& b) {
    return (a - b).max_abs();
  }

 private:
  int modulus_;
  Side side_;
  std::int32_t lo_, hi_;
  Table table_;  // sorted by cell index, no zero coefficients
};

// --- vsf1 text format ------------------------------------------------------
//
//   vsf1 p=<int> side=<primal|dual> window=<lo>:<hi>
//   <digit-string> <re> <im>
//
// One line per nonzero cell, cells in ascending lambda order, coefficients as
// round-trip-safe decimals.

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_vsf(const StepFunction& f, std::ostream& os) {
  os << "vsf1 p=" << f.modulus() << " side=" << side_name(f.side()) << " window=" << f.window_lo()
     << ":" << f.window_hi() << "\n";
  for (const auto& [idx, v] : f.cells())
    os << f.cell_id(idx).to_string() << " " << format_double(v.real()) << " "
       << format_double(v.imag()) << "\n";
}

inline void write_vsf_file(const StepFunction& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_vsf(f, os);
}

inline double parse_double(const std::string& tok, const std::string& ctx) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw ParseError("bad number '" + tok + "' in " + ctx);
  return v;
}

inline StepFunction read_vsf(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty input");
  std::istringstream hs(line);
  std::string magic, ptok, stok, wtok;
  if (!(hs >> magic >> ptok >> stok >> wtok) || magic != "vsf1")
    throw ParseError("malformed header: " + line);
  std::string rest;
  if (hs >> rest) throw ParseError("trailing tokens in header: " + line);
  if (ptok.rfind("p=", 0) != 0 || stok.rfind("side=", 0) != 0 || wtok.rfind("window=", 0) != 0)
    throw ParseError("malformed header: " + line);
  const int p = static_cast<int>(parse_double(ptok.substr(2), "header"));
  if (p < 2 || !is_prime(p)) throw ParseError("p must be prime in header: " + line);
  Side side;
  if (stok.substr(5) == "primal") {
    side = Side::primal;
  } else if (stok.substr(5) == "dual") {
    side = Side::dual;
  } else {
    throw ParseError("side must be primal or dual: " + line);
  }
  const std::string w = wtok.substr(7);
  const auto colon = w.find(':');
  if (colon == std::string::npos) throw ParseError("malformed window: " + line);
  std::int32_t lo, hi;
  try {
    lo = std::stoi(w.substr(0, colon));
    hi = std::stoi(w.substr(colon + 1));
  } catch (const std::exception&) {
    throw ParseError("malformed window: " + line);
  }
  if (lo > hi) throw ParseError("window requires lo <= hi: " + line);

  StepFunction probe = [&] {
    try {
      return StepFunction(p, side, lo, hi);  // validates window width
    } catch (const std::domain_error& e) {
      throw ParseError(std::string(e.what()) + ": " + line);
    }
  }();
  StepFunction::Table table;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell_tok, re_tok, im_tok;
    if (!(ls >> cell_tok >> re_tok >> im_tok)) throw ParseError("malformed cell line: " + line);
    if (ls >> rest) throw ParseError("trailing tokens in cell line: " + line);
    const GroupElement x = parse_element(cell_tok, p, side);
    for (const auto& [j, v] : x.digits())
      if (j <= lo || j > hi) throw ParseError("cell outside window: " + line);
    StepFunction::Cell idx;
    probe.locate(x, idx);
    table.emplace_back(idx, StepFunction::Coeff{parse_double(re_tok, "cell line"),
                                                parse_double(im_tok, "cell line")});
  }
  try {
    return StepFunction::from_cells(p, side, lo, hi, std::move(table));
  } catch (const std::domain_error& e) {
    throw ParseError(e.what());
  }
}

inline StepFunction read_vsf_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open: " + path);
  return read_vsf(is);
}

}  // namespace vilenkin
