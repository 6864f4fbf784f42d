#pragma once

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "io.hpp"
#include "nblang.hpp"
#include "sidestep.hpp"
#include "spectra.hpp"
#include "tangles.hpp"
#include "tracelab.hpp"

namespace nbcover {

using Json = nlohmann::json;

inline Json spectrum_report_json(const SpectrumReport& rep,
                                 const std::vector<double>& epsilons = {}) {
    Json j;
    j["adjacency_old"] = rep.adjacency_old;
    j["adjacency_new"] = rep.adjacency_new;
    Json hashi = Json::array();
    for (const auto& z : rep.hashimoto_all) hashi.push_back({z.real(), z.imag()});
    j["hashimoto"] = hashi;
    j["mu1"] = rep.mu1_value;
    j["new_spectral_radius"] = rep.new_spectral_radius;
    if (rep.d && !epsilons.empty()) {
        Json counts;
        for (double eps : epsilons) counts[format_number(eps)] = non_alon_count(rep, eps);
        j["non_alon_count"] = counts;
    }
    return j;
}

/// Catalog persisted as a directory of graph files plus a JSON manifest.
inline void save_catalog(const TangleCatalog& cat, const std::string& dir) {
    std::filesystem::create_directories(dir);
    Json manifest;
    manifest["nu"] = cat.query.nu;
    manifest["r"] = cat.query.r;
    manifest["edge_bound"] = cat.edge_bound;
    manifest["count"] = cat.tangles.size();
    manifest["mu1_values"] = cat.mu1_values;
    Json files = Json::array();
    for (size_t i = 0; i < cat.tangles.size(); ++i) {
        std::string name = "tangle_" + std::to_string(i) + ".graph";
        save_graph(cat.tangles[i], dir + "/" + name);
        files.push_back(name);
    }
    manifest["files"] = files;
    std::ofstream out(dir + "/catalog.json");
    out << manifest.dump(2) << "\n";
}

inline TangleCatalog load_catalog(const std::string& dir) {
    std::ifstream in(dir + "/catalog.json");
    if (!in) throw Error("cannot open catalog manifest in " + dir);
    Json manifest = Json::parse(in);
    TangleCatalog cat;
    cat.query.nu = manifest["nu"].get<double>();
    cat.query.r = manifest["r"].get<int>();
    cat.edge_bound = manifest["edge_bound"].get<int>();
    cat.complete_up_to = cat.edge_bound;
    cat.mu1_values = manifest["mu1_values"].get<std::vector<double>>();
    for (const auto& f : manifest["files"])
        cat.tangles.push_back(load_graph(dir + "/" + f.get<std::string>()));
    return cat;
}

inline Json certificates_json(const std::string& type_key, double nu, int box,
                              const std::vector<Certificate>& certs) {
    Json j;
    j["type_key"] = type_key;
    j["nu"] = nu;
    j["box"] = box;
    Json list = Json::array();
    for (const Certificate& c : certs) list.push_back(c.xi);
    j["certificates"] = list;
    return j;
}

inline std::string csv_mc_table(const McTraceTable& table) {
    std::string out = "n,k,mean,stderr\n";
    for (size_t i = 0; i < table.n_grid.size(); ++i)
        for (int ki = 0; ki <= table.k_max - table.k_min; ++ki) {
            out += std::to_string(table.n_grid[i]) + "," + std::to_string(table.k_min + ki) +
                   "," + format_number(table.cells[i][ki].mean) + "," +
                   format_number(table.cells[i][ki].stderr_) + "\n";
        }
    return out;
}

inline std::string csv_nonalon(const NonAlonScaling& res) {
    std::string out = "n,epsilon,p_hat,stderr\n";
    for (size_t i = 0; i < res.n_grid.size(); ++i)
        for (size_t e = 0; e < res.epsilons.size(); ++e)
            out += std::to_string(res.n_grid[i]) + "," + format_number(res.epsilons[e]) + "," +
                   format_number(res.p_hat[i][e]) + "," + format_number(res.stderr_[i][e]) + "\n";
    return out;
}

inline std::string csv_sidestep(const SidestepDemoReport& rep) {
    std::string out = "n,region,e_in,e_out\n";
    for (size_t i = 0; i < rep.n_grid.size(); ++i) {
        for (size_t li = 0; li < rep.locations.size(); ++li)
            out += std::to_string(rep.n_grid[i]) + ",disc@" + format_number(rep.locations[li]) +
                   "," + format_number(rep.e_in[i][li]) + ",\n";
        out += std::to_string(rep.n_grid[i]) + ",safe," + "," +
               format_number(rep.e_out[i]) + "\n";
    }
    return out;
}

inline std::string csv_census(const std::vector<CensusRow>& rows) {
    std::string out = "k,order,type_key,lengths,count\n";
    for (const CensusRow& row : rows) {
        std::string lengths;
        for (size_t i = 0; i < row.lengths.size(); ++i) {
            if (i) lengths += " ";
            lengths += std::to_string(row.lengths[i]);
        }
        out += std::to_string(row.k) + "," + std::to_string(row.order) + "," + row.type_key +
               "," + lengths + "," + std::to_string(row.count) + "\n";
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

}  // namespace nbcover
