#ifndef RSD_IO_HPP
#define RSD_IO_HPP

#include <iosfwd>
#include <string>

#include "rsd/decompose.hpp"
#include "rsd/density.hpp"

namespace rsd {

// Density files ("RSD 1"): plain text, exact rationals, '#' comments.
GridDensity read_density(std::istream& in);
GridDensity read_density_file(const std::string& path);
void write_density(std::ostream& out, const GridDensity& d);
void write_density_file(const std::string& path, const GridDensity& d);

// Decomposition files ("RSDEC 1"): header, one line per selected
// rectangle, one line per residual leaf, optional preorder tree dump.
// Reading reconstructs the tree when node lines are present.
Decomposition read_decomposition(std::istream& in);
Decomposition read_decomposition_file(const std::string& path);
void write_decomposition(std::ostream& out, const Decomposition& dec,
                         bool dump_tree = false);
void write_decomposition_file(const std::string& path, const Decomposition& dec,
                              bool dump_tree = false);

std::string to_string(LeafReason reason);

}  // namespace rsd

#endif
