#pragma once

// File formats.
//
//   hoppings JSON  {"name": s, "hoppings": [{"j": j >= 0, "m": [[[re,im],[re,im]],[[re,im],[re,im]]]}, ...]}
//                  m is row-major, m[b][a] = <0,b|H|j,a>, and H(k) = sum_j h_j e^{+ikj} + h.c.
//   loop CSV       header "k,x,y,z,t", one row per node, k ascending from -pi
//   path JSON      {"symmetry": tag, "grid_n": n, "steps": T, "frames": [[[x,y,z,t] x n] x (T+1)]}
//   spectrum CSV   one eigenvalue per line, ascending
//
// Malformed input throws Error(Parse).

#include "twoband/core.hpp"
#include "twoband/homotopy.hpp"
#include "twoband/multiband.hpp"

#include <iosfwd>
#include <string>

namespace twoband::io {

Hoppings parse_hoppings(const std::string& json_text);
std::string dump_hoppings(const Hoppings& h);
Hoppings read_hoppings(const std::string& path);
void write_hoppings(const Hoppings& h, const std::string& path);

void write_loop_csv(const SampledLoop& loop, std::ostream& out);

HomotopyPath parse_path(const std::string& json_text);
std::string dump_path(const HomotopyPath& p);
HomotopyPath read_path(const std::string& path);
void write_path(const HomotopyPath& p, const std::string& path);

void write_spectrum_csv(const ChainSpectrum& s, std::ostream& out);

/// Whole file as a string; throws Parse if it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace twoband::io
