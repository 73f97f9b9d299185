#include "plap/trajectory_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "plap/errors.hpp"

namespace plap {

static_assert(std::endian::native == std::endian::little, "trajectory files assume a little-endian host");

namespace {

template <class T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is, const std::filesystem::path& file) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw IoError("truncated trajectory file " + file.string());
    return v;
}

double parse_double(const Metadata& meta, const std::string& key) {
    const auto it = meta.find(key);
    if (it == meta.end()) throw IoError("metadata lacks key '" + key + "'");
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw IoError("metadata key '" + key + "' is not a number");
    }
}

}  // namespace

std::filesystem::path meta_path(const std::filesystem::path& trajectory_file) {
    return std::filesystem::path(trajectory_file.string() + ".meta");
}

void write_metadata(const std::filesystem::path& meta_file, const Metadata& meta) {
    std::ofstream os(meta_file, std::ios::trunc);
    if (!os) throw IoError("cannot write " + meta_file.string());
    for (const auto& [k, v] : meta) os << k << " = " << v << '\n';
    if (!os) throw IoError("error while writing " + meta_file.string());
}

Metadata read_metadata(const std::filesystem::path& meta_file) {
    if (!std::filesystem::exists(meta_file)) throw IoError("metadata file not found: " + meta_file.string());
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(meta_file.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw IoError("malformed metadata file " + meta_file.string() + ": " + e.message());
    }
    Metadata meta;
    for (const auto& [k, v] : tree) meta[k] = v.get_value<std::string>();
    return meta;
}

void write_trajectory(const std::filesystem::path& file, const Trajectory& tr, const Metadata& extra) {
    std::ofstream os(file, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write " + file.string());
    const auto n = static_cast<std::uint64_t>(tr.grid.n());
    put<std::uint64_t>(os, n);
    put<std::uint64_t>(os, 2);
    put<double>(os, tr.dt);
    put<std::uint64_t>(os, static_cast<std::uint64_t>(tr.steps()));
    for (const auto& s : tr.snapshots)
        os.write(reinterpret_cast<const char*>(s.data().data()),
                 static_cast<std::streamsize>(s.data().size() * sizeof(double)));
    if (!os) throw IoError("error while writing " + file.string());

    Metadata meta = extra;
    meta["model"] = std::string(to_string(tr.model.model));
    meta["p"] = format_double(tr.model.p);
    meta["mu"] = format_double(tr.model.mu);
    meta["n"] = std::to_string(tr.grid.n());
    meta["dt"] = format_double(tr.dt);
    meta["T_final"] = format_double(tr.final_time());
    meta["steps"] = std::to_string(tr.steps());
    meta["status"] = tr.status;
    write_metadata(meta_path(file), meta);
}

Trajectory read_trajectory(const std::filesystem::path& file, Metadata* meta_out) {
    if (!std::filesystem::exists(file)) throw IoError("trajectory file not found: " + file.string());
    std::ifstream is(file, std::ios::binary);
    if (!is) throw IoError("cannot open " + file.string());
    const auto n = get<std::uint64_t>(is, file);
    const auto d = get<std::uint64_t>(is, file);
    const auto dt = get<double>(is, file);
    const auto steps = get<std::uint64_t>(is, file);
    if (d != 2) throw IoError("only two-dimensional trajectories are supported");
    if (n < 8 || n > (1u << 14)) throw IoError("implausible grid size in " + file.string());

    const Metadata meta = read_metadata(meta_path(file));
    Trajectory tr;
    try {
        tr.grid = TorusGrid(static_cast<int>(n));
        tr.model.model = parse_model(meta.count("model") ? meta.at("model") : "");
    } catch (const DomainError& e) {
        throw IoError(std::string("invalid trajectory header or metadata: ") + e.what());
    }
    tr.model.p = parse_double(meta, "p");
    tr.model.mu = parse_double(meta, "mu");
    tr.dt = dt;
    tr.status = meta.count("status") ? meta.at("status") : "ok";
    tr.complete = tr.status == "ok";
    const std::size_t size = 2 * tr.grid.points();
    tr.snapshots.reserve(steps + 1);
    for (std::uint64_t k = 0; k <= steps; ++k) {
        std::vector<double> data(size);
        if (!is.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(size * sizeof(double))))
            throw IoError("truncated trajectory file " + file.string());
        tr.snapshots.emplace_back(tr.grid, std::move(data));
    }
    tr.initial_energy = energy(tr.snapshots.front(), tr.model);
    if (meta_out) *meta_out = meta;
    return tr;
}

}  // namespace plap
