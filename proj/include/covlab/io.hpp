#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covlab/covering.hpp"
#include "covlab/curve.hpp"
#include "covlab/frostman.hpp"
#include "covlab/spectra.hpp"

namespace covlab {

// Shortest round-trip decimal rendering of a double.
std::string format_double(double v);

// FNV-1a 64-bit digest, hex-encoded.
std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

// CSV body builders.  Every file starts with '#'-prefixed metadata lines.
std::string curve_csv(const SpectrumCurve& curve, const std::vector<std::string>& metadata);
std::string hull_csv(const SpectrumCurve& input, const SpectrumCurve& hull,
                     const SpectrumCurve& tilde, const std::vector<std::string>& metadata);
std::string window_csv(const std::vector<WindowRow>& rows, const std::vector<std::string>& metadata);
std::string cover_csv(const CoverSequence& cover, long first, long last,
                      const std::vector<std::string>& metadata);
std::string coarse_counts_csv(const CoarseSpectrumReport& report, const SpectrumCurve& g,
                              const std::vector<std::string>& metadata);
std::string energy_csv(const EnergyReport& report, const std::vector<std::string>& metadata);

// Line-oriented tree format: one node per line,
//   generation parent_id node_id center... radius weight c_B
std::string tree_text(const FractalTree& tree, const std::vector<std::string>& metadata);
FractalTree parse_tree_text(const std::string& text);

// Parses a two-column (s,value) curve CSV, skipping '#' lines and a header row.
SpectrumCurve parse_curve_csv(const std::string& text);

void write_file(const std::string& path, const std::string& body);
std::string read_file(const std::string& path);

}  // namespace covlab
