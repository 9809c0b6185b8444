#include "scramble/io.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace scramble {

namespace {

using boost::multiprecision::cpp_int;

void require_stream(const std::ostream& out, const std::string& path) {
    if (!out) throw std::runtime_error("io: cannot write " + path);
}

}  // namespace

std::string format_cell(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

void write_csv(const CsvTable& table, const std::string& path) {
    if (table.header.empty()) throw std::invalid_argument("write_csv: header row is mandatory");
    std::ofstream out(path, std::ios::binary);  // binary: keep '\n' endings everywhere
    require_stream(out, path);
    auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::invalid_argument("write_csv: row width does not match header");
        emit(row);
    }
    out.flush();
    require_stream(out, path);
}

CsvTable distribution_table(const TimeSeries<OperatorDistribution>& series) {
    CsvTable table;
    table.header = {"time", "k", "p_k"};
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& dist = series.values[i];
        for (int k = 1; k <= dist.k_max(); ++k)
            table.rows.push_back(
                {format_cell(series.times[i]), std::to_string(k), format_cell(dist.at(k))});
    }
    return table;
}

CsvTable measure_table(const TimeSeries<OperatorDistribution>& series) {
    CsvTable table;
    table.header = {"time", "mean", "variance", "ipr"};
    for (std::size_t i = 0; i < series.size(); ++i) {
        const DistributionMeasures m = measures(series.values[i]);
        table.rows.push_back({format_cell(series.times[i]), format_cell(m.mean),
                              format_cell(m.variance), format_cell(m.ipr)});
    }
    return table;
}

CsvTable haar_table(const HaarPrediction& prediction, ClassBasis basis) {
    CsvTable table;
    table.header = {"k", "dim_Ck", "pk_haar"};
    const int k_max = int(prediction.pk.size());
    for (int k = 1; k <= k_max; ++k) {
        cpp_int dim;
        if (basis == ClassBasis::pauli_weight) {
            dim = 1;
            for (int t = 0; t < k; ++t) {
                dim *= prediction.n_sites - t;
                dim /= t + 1;
                dim *= 3;
            }
        } else {
            dim = 2 * k + 1;
        }
        table.rows.push_back({std::to_string(k), dim.str(), format_cell(prediction.pk(k - 1))});
    }
    return table;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t config_hash(const Manifest& manifest) {
    std::string echo;
    for (const auto& [key, value] : manifest.config) {
        echo += key;
        echo += '=';
        echo += value;
        echo += '\n';
    }
    return fnv1a(echo);
}

void write_manifest(const Manifest& manifest, const std::string& path) {
    char hash_hex[20];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(config_hash(manifest)));

    nlohmann::json doc;
    doc["tool_version"] = kVersion;
    doc["subcommand"] = manifest.subcommand;
    nlohmann::json config = nlohmann::json::object();
    for (const auto& [key, value] : manifest.config) config[key] = value;
    doc["config"] = config;
    doc["config_hash"] = hash_hex;
    doc["seed"] = manifest.seed;
    nlohmann::json artifacts = nlohmann::json::array();
    for (const auto& artifact : manifest.artifacts)
        artifacts.push_back({{"path", artifact}, {"config_hash", hash_hex}});
    doc["artifacts"] = artifacts;
    doc["wall_time_s"] = manifest.wall_time_s;

    std::ofstream out(path, std::ios::binary);
    require_stream(out, path);
    out << doc.dump(2) << '\n';
    out.flush();
    require_stream(out, path);
}

namespace {

constexpr char kBasisMagic[4] = {'S', 'T', 'B', '1'};

}  // namespace

void save_tensor_basis(const SphericalTensorBasis& basis, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require_stream(out, path);
    out.write(kBasisMagic, 4);
    const std::uint32_t two_j = std::uint32_t(basis.max_rank());
    out.write(reinterpret_cast<const char*>(&two_j), sizeof two_j);
    const int d = basis.dim();
    for (int l = 0; l <= basis.max_rank(); ++l)
        for (int m = -l; m <= l; ++m) {
            const Matrix& t = basis.tensor(l, m);
            // band: entries (col - m, col)
            for (int col = std::max(0, m); col < std::min(d, d + m); ++col) {
                const complex value = t(col - m, col);
                out.write(reinterpret_cast<const char*>(&value), sizeof value);
            }
        }
    out.flush();
    require_stream(out, path);
}

SphericalTensorBasis load_tensor_basis(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("io: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kBasisMagic, 4) != 0)
        throw std::runtime_error("io: " + path + " is not a tensor-basis cache");
    std::uint32_t two_j = 0;
    in.read(reinterpret_cast<char*>(&two_j), sizeof two_j);
    if (!in || two_j > 512)
        throw std::runtime_error("io: " + path + " has an invalid spin header");

    const int d = int(two_j) + 1;
    std::vector<std::vector<Matrix>> tensors(two_j + 1);
    for (int l = 0; l <= int(two_j); ++l) {
        tensors[std::size_t(l)].assign(std::size_t(2 * l + 1), Matrix());
        for (int m = -l; m <= l; ++m) {
            Matrix t = Matrix::Zero(d, d);
            for (int col = std::max(0, m); col < std::min(d, d + m); ++col) {
                complex value;
                in.read(reinterpret_cast<char*>(&value), sizeof value);
                if (!in) throw std::runtime_error("io: " + path + " is truncated");
                t(col - m, col) = value;
            }
            tensors[std::size_t(l)][std::size_t(m + l)] = std::move(t);
        }
    }
    return SphericalTensorBasis::from_tensors(0.5 * double(two_j), std::move(tensors));
}

}  // namespace scramble
