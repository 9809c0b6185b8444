#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "scramble/collective.hpp"
#include "scramble/haar.hpp"
#include "scramble/operator_space.hpp"

namespace scramble {

// One numeric cell: 12 significant digits, '.' decimal separator.
std::string format_cell(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Writes header + rows with '\n' line endings; the header is mandatory and
// every row must match its width.
void write_csv(const CsvTable& table, const std::string& path);

// Long-format class probabilities: time,k,p_k.
CsvTable distribution_table(const TimeSeries<OperatorDistribution>& series);

// Summary measures per sample: time,mean,variance,ipr.
CsvTable measure_table(const TimeSeries<OperatorDistribution>& series);

// Baseline table: k,dim_Ck,pk_haar (class dimensions exact).
CsvTable haar_table(const HaarPrediction& prediction, ClassBasis basis);

std::uint64_t fnv1a(const std::string& text);

// Everything needed to reproduce a run; written next to the artifacts as
// JSON. `config` keeps insertion order and defines the canonical echo text
// that is hashed.
struct Manifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> config;
    std::uint64_t seed = 0;
    std::vector<std::string> artifacts;
    double wall_time_s = 0;
};

// FNV-1a over "key=value\n" lines in insertion order.
std::uint64_t config_hash(const Manifest& manifest);

void write_manifest(const Manifest& manifest, const std::string& path);

// Binary cache of a spherical-tensor basis; stores only the diagonal bands.
void save_tensor_basis(const SphericalTensorBasis& basis, const std::string& path);
SphericalTensorBasis load_tensor_basis(const std::string& path);

}  // namespace scramble
