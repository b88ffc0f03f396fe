// Bundle I/O and synthetic instance generation.
//
// A bundle is a directory of CSV files plus a JSON manifest:
//   branches.csv        branch_id,total,bradso_cap
//   cadets.csv          cadet_id,oml_rank
//   priorities.csv      branch_id,cadet_id,rank          (optional; default OML)
//   tiers.csv           branch_id,cadet_id,tier          (optional)
//   policy.csv          branch_id,cadet_id,cost,rank     (custom policies only)
//   contract_prefs.csv  cadet_id,rank,branch_id,cost     cost in {BASE,BRADSO,UNMATCHED}
//   strategies.csv      cadet_id,rank,branch_id          (optional)
//   willing.csv         cadet_id,branch_id               (optional)
//   manifest.json       format version, regime, policy variant, seed, content hash
//
// A contract_prefs row with cost UNMATCHED is the acceptability cutoff;
// entries ranked below it are unacceptable. Files are written atomically
// (temp file then rename) and generation is byte-reproducible per seed.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cbm/analysis.hpp"
#include "cbm/axioms.hpp"
#include "cbm/core.hpp"
#include "cbm/equilibrium.hpp"
#include "cbm/mechanisms.hpp"
#include "cbm/policies.hpp"

namespace cbm {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Errors and small file helpers

class ParseError : public Error {
public:
    ParseError(const std::string& file, int line, int column, const std::string& message)
        : Error("parse", file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                             message),
          file_(file),
          line_(line),
          column_(column) {}
    const std::string& file() const { return file_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    std::string file_;
    int line_;
    int column_;
};

namespace io_detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io.open", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("io.write", "cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline std::uint64_t fnv1a(const std::string& data, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct CsvRow {
    std::vector<std::string> fields;
    int line = 0;
};

// Strict CSV: exact header, comma-separated, no quoting (ids must not
// contain commas).
inline std::vector<CsvRow> read_csv(const std::filesystem::path& path,
                                    const std::vector<std::string>& header) {
    const std::string text = read_file(path);
    std::vector<CsvRow> rows;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        CsvRow row;
        row.line = line_no;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            row.fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos
                                                                               : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (line_no == 1) {
            if (row.fields != header)
                throw ParseError(path.string(), 1, 1, "expected header " + [&] {
                    std::string h;
                    for (const auto& f : header) h += (h.empty() ? "" : ",") + f;
                    return h;
                }());
            continue;
        }
        if (row.fields.size() != header.size())
            throw ParseError(path.string(), line_no, static_cast<int>(row.fields.size()),
                             "expected " + std::to_string(header.size()) + " fields");
        rows.push_back(std::move(row));
    }
    return rows;
}

inline int parse_int(const std::string& s, const std::string& file, int line, int col) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(file, line, col, "not an integer: '" + s + "'");
    }
}

inline Cost parse_cost(const std::string& s, const std::string& file, int line, int col) {
    if (s == "BASE") return Cost::Base;
    if (s == "BRADSO") return Cost::Increased;
    throw ParseError(file, line, col, "cost must be BASE or BRADSO, got '" + s + "'");
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Bundles

struct Manifest {
    int format_version = 1;
    std::string regime = "com-bradso";
    std::string policy_variant = "ultimate";
    std::uint64_t seed = 0;
    std::optional<std::string> content_hash;
    std::vector<std::vector<int>> tier_counts;  // per branch, when generated with tiers
};

struct InstanceBundle {
    Economy economy;
    std::vector<TierAssignment> tiers;                // empty when the bundle has none
    std::vector<ContractPreference> contract_prefs;   // empty when the bundle has none
    std::vector<QuasiStrategy> strategies;            // empty when the bundle has none
    Manifest manifest;
};

namespace io_detail {

// Order in which data files enter the bundle hash.
inline const std::vector<std::string>& bundle_files() {
    static const std::vector<std::string> files = {
        "branches.csv", "cadets.csv",     "priorities.csv", "tiers.csv",
        "policy.csv",   "contract_prefs.csv", "strategies.csv", "willing.csv"};
    return files;
}

inline std::string bundle_hash(const std::filesystem::path& dir) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& name : bundle_files()) {
        const auto path = dir / name;
        if (!std::filesystem::exists(path)) continue;
        h = fnv1a(name, h);
        h = fnv1a(read_file(path), h);
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace io_detail

inline InstanceBundle load_bundle(const std::filesystem::path& dir) {
    namespace d = io_detail;
    InstanceBundle bundle;

    // Manifest first: it decides how policies are built.
    const auto manifest_path = dir / "manifest.json";
    if (std::filesystem::exists(manifest_path)) {
        const json j = json::parse(d::read_file(manifest_path));
        Manifest m;
        m.format_version = j.value("format_version", 1);
        m.regime = j.value("regime", std::string("com-bradso"));
        m.policy_variant = j.value("policy_variant", std::string("ultimate"));
        m.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("content_hash")) m.content_hash = j["content_hash"].get<std::string>();
        if (j.contains("tier_counts"))
            m.tier_counts = j["tier_counts"].get<std::vector<std::vector<int>>>();
        bundle.manifest = std::move(m);
        if (bundle.manifest.content_hash &&
            *bundle.manifest.content_hash != d::bundle_hash(dir))
            throw Error("bundle.hash", "manifest content hash does not match bundle files");
    }

    // Cadets in OML order.
    const auto cadet_rows = d::read_csv(dir / "cadets.csv", {"cadet_id", "oml_rank"});
    std::vector<std::pair<int, std::string>> ranked;
    for (const auto& r : cadet_rows)
        ranked.emplace_back(d::parse_int(r.fields[1], "cadets.csv", r.line, 2), r.fields[0]);
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::string> cadet_names;
    std::map<std::string, int> cadet_index;
    for (std::size_t k = 0; k < ranked.size(); ++k) {
        if (ranked[k].first != static_cast<int>(k) + 1)
            throw Error("bundle.oml", "oml_rank values must form 1..n");
        if (!cadet_index.emplace(ranked[k].second, static_cast<int>(k)).second)
            throw Error("bundle.duplicate_cadet", "duplicate cadet id '" + ranked[k].second + "'");
        cadet_names.push_back(ranked[k].second);
    }
    const int n = static_cast<int>(cadet_names.size());

    const auto branch_rows =
        d::read_csv(dir / "branches.csv", {"branch_id", "total", "bradso_cap"});
    std::vector<std::string> branch_names;
    std::vector<BranchQuota> quotas;
    std::map<std::string, int> branch_index;
    for (const auto& r : branch_rows) {
        if (!branch_index.emplace(r.fields[0], static_cast<int>(branch_names.size())).second)
            throw Error("bundle.duplicate_branch", "duplicate branch id '" + r.fields[0] + "'");
        branch_names.push_back(r.fields[0]);
        quotas.push_back({d::parse_int(r.fields[1], "branches.csv", r.line, 2),
                          d::parse_int(r.fields[2], "branches.csv", r.line, 3)});
    }
    const int m = static_cast<int>(branch_names.size());

    auto resolve_cadet = [&](const std::string& name, const std::string& file, int line) {
        const auto it = cadet_index.find(name);
        if (it == cadet_index.end())
            throw ParseError(file, line, 1, "unknown cadet id '" + name + "'");
        return CadetId{it->second};
    };
    auto resolve_branch = [&](const std::string& name, const std::string& file, int line) {
        const auto it = branch_index.find(name);
        if (it == branch_index.end())
            throw ParseError(file, line, 1, "unknown branch id '" + name + "'");
        return BranchId{it->second};
    };

    // Priorities; every branch defaults to the OML when the file is absent.
    std::vector<std::vector<CadetId>> orders(m);
    if (std::filesystem::exists(dir / "priorities.csv")) {
        const auto rows =
            d::read_csv(dir / "priorities.csv", {"branch_id", "cadet_id", "rank"});
        std::vector<std::vector<std::pair<int, CadetId>>> per_branch(m);
        for (const auto& r : rows)
            per_branch[resolve_branch(r.fields[0], "priorities.csv", r.line).v].emplace_back(
                d::parse_int(r.fields[2], "priorities.csv", r.line, 3),
                resolve_cadet(r.fields[1], "priorities.csv", r.line));
        for (int b = 0; b < m; ++b) {
            auto& rows_b = per_branch[b];
            if (static_cast<int>(rows_b.size()) != n)
                throw Error("bundle.priority",
                            "priorities.csv must rank every cadet at branch '" + branch_names[b] +
                                "'");
            std::sort(rows_b.begin(), rows_b.end());
            for (int k = 0; k < n; ++k) {
                if (rows_b[k].first != k + 1)
                    throw Error("bundle.priority", "priority ranks must form 1..n at branch '" +
                                                       branch_names[b] + "'");
                orders[b].push_back(rows_b[k].second);
            }
        }
    } else {
        for (int b = 0; b < m; ++b)
            for (int i = 0; i < n; ++i) orders[b].push_back(CadetId{i});
    }
    std::vector<BaselinePriority> priorities;
    for (int b = 0; b < m; ++b)
        priorities.push_back(BaselinePriority::from_order(BranchId{b}, orders[b]));

    // Tiers.
    if (std::filesystem::exists(dir / "tiers.csv")) {
        const auto rows = d::read_csv(dir / "tiers.csv", {"branch_id", "cadet_id", "tier"});
        std::vector<std::vector<int>> tier_of(m, std::vector<int>(n, -1));
        for (const auto& r : rows)
            tier_of[resolve_branch(r.fields[0], "tiers.csv", r.line).v]
                   [resolve_cadet(r.fields[1], "tiers.csv", r.line).v] =
                d::parse_int(r.fields[2], "tiers.csv", r.line, 3);
        for (int b = 0; b < m; ++b) {
            for (int i = 0; i < n; ++i)
                if (tier_of[b][i] < 0)
                    throw Error("bundle.tiers", "tiers.csv must cover every cadet at branch '" +
                                                    branch_names[b] + "'");
            bundle.tiers.push_back(TierAssignment::make(priorities[b], tier_of[b]));
        }
    }

    // Policies per the manifest's variant.
    std::vector<BradsoPolicy> policies;
    const std::string& variant = bundle.manifest.policy_variant;
    for (int b = 0; b < m; ++b) {
        if (variant == "ultimate") {
            policies.push_back(ultimate_policy(priorities[b]));
        } else if (variant == "tier2020" || variant == "tier2021") {
            if (bundle.tiers.empty())
                throw Error("bundle.tiers", "tiered policy variant requires tiers.csv");
            policies.push_back(tiered_policy(priorities[b], bundle.tiers[b],
                                             variant == "tier2020" ? TieredVariant::Tier2020
                                                                   : TieredVariant::Tier2021));
        } else if (variant == "custom") {
            policies.emplace_back();  // filled below
        } else {
            throw Error("bundle.policy", "unknown policy variant '" + variant + "'");
        }
    }
    if (variant == "custom") {
        const auto rows =
            d::read_csv(dir / "policy.csv", {"branch_id", "cadet_id", "cost", "rank"});
        std::vector<std::vector<std::pair<int, std::pair<CadetId, Cost>>>> per_branch(m);
        for (const auto& r : rows)
            per_branch[resolve_branch(r.fields[0], "policy.csv", r.line).v].emplace_back(
                d::parse_int(r.fields[3], "policy.csv", r.line, 4),
                std::make_pair(resolve_cadet(r.fields[1], "policy.csv", r.line),
                               d::parse_cost(r.fields[2], "policy.csv", r.line, 3)));
        for (int b = 0; b < m; ++b) {
            auto& rows_b = per_branch[b];
            std::sort(rows_b.begin(), rows_b.end());
            std::vector<std::pair<CadetId, Cost>> order;
            for (std::size_t k = 0; k < rows_b.size(); ++k) {
                if (rows_b[k].first != static_cast<int>(k) + 1)
                    throw Error("bundle.policy", "policy ranks must form 1..2n at branch '" +
                                                     branch_names[b] + "'");
                order.push_back(rows_b[k].second);
            }
            policies[b] = BradsoPolicy::from_order(priorities[b], order);
        }
    }

    bundle.economy = Economy::make(cadet_names, branch_names, quotas, priorities, policies);

    // Contract preferences.
    if (std::filesystem::exists(dir / "contract_prefs.csv")) {
        const auto rows = d::read_csv(dir / "contract_prefs.csv",
                                      {"cadet_id", "rank", "branch_id", "cost"});
        struct Entry {
            int rank;
            bool sentinel;
            std::pair<BranchId, Cost> pair;
            int line;
        };
        std::vector<std::vector<Entry>> per_cadet(n);
        for (const auto& r : rows) {
            const CadetId i = resolve_cadet(r.fields[0], "contract_prefs.csv", r.line);
            const int rank = d::parse_int(r.fields[1], "contract_prefs.csv", r.line, 2);
            if (r.fields[3] == "UNMATCHED") {
                per_cadet[i.v].push_back({rank, true, {}, r.line});
            } else {
                per_cadet[i.v].push_back(
                    {rank, false,
                     {resolve_branch(r.fields[2], "contract_prefs.csv", r.line),
                      d::parse_cost(r.fields[3], "contract_prefs.csv", r.line, 4)},
                     r.line});
            }
        }
        for (int i = 0; i < n; ++i) {
            auto& entries = per_cadet[i];
            std::sort(entries.begin(), entries.end(),
                      [](const Entry& a, const Entry& b) { return a.rank < b.rank; });
            for (std::size_t k = 0; k + 1 < entries.size(); ++k)
                if (entries[k].rank == entries[k + 1].rank)
                    throw ParseError("contract_prefs.csv", entries[k + 1].line, 2,
                                     "duplicate rank for cadet '" + cadet_names[i] + "'");
            std::vector<std::pair<BranchId, Cost>> acceptable, tail;
            bool below = false;
            for (const auto& e : entries) {
                if (e.sentinel) {
                    if (below)
                        throw ParseError("contract_prefs.csv", e.line, 4,
                                         "duplicate UNMATCHED sentinel");
                    below = true;
                } else {
                    (below ? tail : acceptable).push_back(e.pair);
                }
            }
            bundle.contract_prefs.push_back(
                ContractPreference::make(CadetId{i}, acceptable, tail));
        }
    }

    // Quasi-direct strategies.
    if (std::filesystem::exists(dir / "strategies.csv")) {
        const auto rows = d::read_csv(dir / "strategies.csv", {"cadet_id", "rank", "branch_id"});
        std::vector<std::vector<std::pair<int, BranchId>>> per_cadet(n);
        for (const auto& r : rows)
            per_cadet[resolve_cadet(r.fields[0], "strategies.csv", r.line).v].emplace_back(
                d::parse_int(r.fields[1], "strategies.csv", r.line, 2),
                resolve_branch(r.fields[2], "strategies.csv", r.line));
        std::vector<std::vector<BranchId>> willing(n);
        if (std::filesystem::exists(dir / "willing.csv")) {
            const auto wrows = d::read_csv(dir / "willing.csv", {"cadet_id", "branch_id"});
            for (const auto& r : wrows)
                willing[resolve_cadet(r.fields[0], "willing.csv", r.line).v].push_back(
                    resolve_branch(r.fields[1], "willing.csv", r.line));
        }
        for (int i = 0; i < n; ++i) {
            std::sort(per_cadet[i].begin(), per_cadet[i].end());
            std::vector<BranchId> order;
            for (const auto& [rank, b] : per_cadet[i]) order.push_back(b);
            bundle.strategies.push_back(QuasiStrategy::make(CadetId{i}, order, willing[i]));
        }
    }

    return bundle;
}

inline Economy parse_economy(const std::filesystem::path& dir) { return load_bundle(dir).economy; }

// ---------------------------------------------------------------------------
// Bundle writing

namespace io_detail {

inline void check_id(const std::string& id) {
    if (id.empty() || id.find(',') != std::string::npos || id.find('\n') != std::string::npos ||
        id == "UNMATCHED" || id == "ALL")
        throw Error("io.id", "invalid id '" + id + "'");
}

}  // namespace io_detail

inline void write_bundle(const InstanceBundle& bundle, const std::filesystem::path& dir,
                         bool with_hash = true) {
    namespace d = io_detail;
    const Economy& e = bundle.economy;
    std::filesystem::create_directories(dir);
    for (const auto& name : e.cadet_names()) d::check_id(name);
    for (const auto& name : e.branch_names()) d::check_id(name);

    std::ostringstream cadets;
    cadets << "cadet_id,oml_rank\n";
    for (int i = 0; i < e.num_cadets(); ++i)
        cadets << e.cadet_name(CadetId{i}) << "," << i + 1 << "\n";
    d::atomic_write(dir / "cadets.csv", cadets.str());

    std::ostringstream branches;
    branches << "branch_id,total,bradso_cap\n";
    for (int b = 0; b < e.num_branches(); ++b)
        branches << e.branch_name(BranchId{b}) << "," << e.quota(BranchId{b}).total << ","
                 << e.quota(BranchId{b}).bradso_cap << "\n";
    d::atomic_write(dir / "branches.csv", branches.str());

    std::ostringstream prios;
    prios << "branch_id,cadet_id,rank\n";
    for (int b = 0; b < e.num_branches(); ++b)
        for (int r = 0; r < e.num_cadets(); ++r)
            prios << e.branch_name(BranchId{b}) << ","
                  << e.cadet_name(e.priority(BranchId{b}).at_rank(r)) << "," << r + 1 << "\n";
    d::atomic_write(dir / "priorities.csv", prios.str());

    if (!bundle.tiers.empty()) {
        std::ostringstream tiers;
        tiers << "branch_id,cadet_id,tier\n";
        for (int b = 0; b < e.num_branches(); ++b)
            for (int i = 0; i < e.num_cadets(); ++i)
                tiers << e.branch_name(BranchId{b}) << "," << e.cadet_name(CadetId{i}) << ","
                      << bundle.tiers[b].tier(CadetId{i}) << "\n";
        d::atomic_write(dir / "tiers.csv", tiers.str());
    }

    if (bundle.manifest.policy_variant == "custom") {
        std::ostringstream policy;
        policy << "branch_id,cadet_id,cost,rank\n";
        for (int b = 0; b < e.num_branches(); ++b) {
            const auto order = e.policy(BranchId{b}).order();
            for (std::size_t k = 0; k < order.size(); ++k)
                policy << e.branch_name(BranchId{b}) << "," << e.cadet_name(order[k].first) << ","
                       << to_string(order[k].second) << "," << k + 1 << "\n";
        }
        d::atomic_write(dir / "policy.csv", policy.str());
    }

    if (!bundle.contract_prefs.empty()) {
        std::ostringstream prefs;
        prefs << "cadet_id,rank,branch_id,cost\n";
        for (const auto& p : bundle.contract_prefs) {
            int rank = 1;
            for (const auto& [b, t] : p.acceptable())
                prefs << e.cadet_name(p.cadet()) << "," << rank++ << "," << e.branch_name(b) << ","
                      << to_string(t) << "\n";
            prefs << e.cadet_name(p.cadet()) << "," << rank++ << ",-,UNMATCHED\n";
            for (const auto& [b, t] : p.unacceptable_tail())
                prefs << e.cadet_name(p.cadet()) << "," << rank++ << "," << e.branch_name(b) << ","
                      << to_string(t) << "\n";
        }
        d::atomic_write(dir / "contract_prefs.csv", prefs.str());
    }

    if (!bundle.strategies.empty()) {
        std::ostringstream strat, willing;
        strat << "cadet_id,rank,branch_id\n";
        willing << "cadet_id,branch_id\n";
        for (const auto& s : bundle.strategies) {
            int rank = 1;
            for (BranchId b : s.branch_order())
                strat << e.cadet_name(s.cadet()) << "," << rank++ << "," << e.branch_name(b)
                      << "\n";
            for (BranchId b : s.bradso_set())
                willing << e.cadet_name(s.cadet()) << "," << e.branch_name(b) << "\n";
        }
        d::atomic_write(dir / "strategies.csv", strat.str());
        d::atomic_write(dir / "willing.csv", willing.str());
    }

    json manifest;
    manifest["format_version"] = bundle.manifest.format_version;
    manifest["regime"] = bundle.manifest.regime;
    manifest["policy_variant"] = bundle.manifest.policy_variant;
    manifest["seed"] = bundle.manifest.seed;
    if (!bundle.manifest.tier_counts.empty())
        manifest["tier_counts"] = bundle.manifest.tier_counts;
    if (with_hash) manifest["content_hash"] = io_detail::bundle_hash(dir);
    d::atomic_write(dir / "manifest.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Allocation, trace, report and sweep serialization

inline std::string allocation_to_csv(const Economy& econ, const Allocation& alloc) {
    std::ostringstream os;
    os << "cadet_id,branch_id,cost\n";
    const auto table = alloc.table(econ.num_cadets());
    for (int i = 0; i < econ.num_cadets(); ++i) {
        os << econ.cadet_name(CadetId{i}) << ",";
        if (table[i])
            os << econ.branch_name(table[i]->branch) << "," << to_string(table[i]->cost);
        else
            os << "UNMATCHED,-";
        os << "\n";
    }
    return os.str();
}

inline Allocation allocation_from_csv(const Economy& econ, const std::filesystem::path& path) {
    const auto rows = io_detail::read_csv(path, {"cadet_id", "branch_id", "cost"});
    std::vector<Contract> contracts;
    for (const auto& r : rows) {
        const auto cadet = econ.find_cadet(r.fields[0]);
        if (!cadet) throw ParseError(path.string(), r.line, 1, "unknown cadet '" + r.fields[0] + "'");
        if (r.fields[1] == "UNMATCHED") continue;
        const auto branch = econ.find_branch(r.fields[1]);
        if (!branch)
            throw ParseError(path.string(), r.line, 2, "unknown branch '" + r.fields[1] + "'");
        contracts.push_back(
            {*cadet, *branch, io_detail::parse_cost(r.fields[2], path.string(), r.line, 3)});
    }
    return Allocation::from_contracts(std::move(contracts));
}

inline json allocation_to_json(const Economy& econ, const Allocation& alloc) {
    json out = json::array();
    const auto table = alloc.table(econ.num_cadets());
    for (int i = 0; i < econ.num_cadets(); ++i) {
        json row;
        row["cadet"] = econ.cadet_name(CadetId{i});
        if (table[i]) {
            row["branch"] = econ.branch_name(table[i]->branch);
            row["cost"] = to_string(table[i]->cost);
        } else {
            row["branch"] = nullptr;
            row["cost"] = nullptr;
        }
        out.push_back(std::move(row));
    }
    return out;
}

inline const char* to_string(TraceEvent e) {
    switch (e) {
        case TraceEvent::Propose: return "propose";
        case TraceEvent::Hold: return "hold";
        case TraceEvent::Reject: return "reject";
        case TraceEvent::CostCharge: return "cost-charge";
    }
    return "?";
}

inline std::string trace_to_csv(const Economy& econ, const MechanismTrace& trace) {
    std::ostringstream os;
    os << "step,event,cadet_id,branch_id,cost\n";
    for (const auto& e : trace.entries)
        os << e.step << "," << to_string(e.event) << "," << econ.cadet_name(e.cadet) << ","
           << econ.branch_name(e.branch) << "," << (e.cost ? to_string(*e.cost) : "-") << "\n";
    return os.str();
}

inline json trace_to_json(const Economy& econ, const MechanismTrace& trace) {
    json out = json::array();
    for (const auto& e : trace.entries) {
        json row;
        row["step"] = e.step;
        row["event"] = to_string(e.event);
        row["cadet"] = econ.cadet_name(e.cadet);
        row["branch"] = econ.branch_name(e.branch);
        if (e.cost) row["cost"] = to_string(*e.cost);
        out.push_back(std::move(row));
    }
    return out;
}

inline json report_to_json(const Economy& econ, const AxiomReport& report) {
    json out;
    out["axiom"] = report.axiom;
    out["verdict"] = report.holds ? "holds" : "violated";
    out["witnesses"] = json::array();
    for (const auto& w : report.witnesses) {
        json jw;
        jw["cadets"] = json::array();
        for (CadetId c : w.cadets) jw["cadets"].push_back(econ.cadet_name(c));
        jw["branch"] = w.branch ? json(econ.branch_name(*w.branch)) : json(nullptr);
        if (w.clause != 0) jw["clause"] = w.clause;
        jw["explanation"] = w.explanation;
        out["witnesses"].push_back(std::move(jw));
    }
    return out;
}

inline std::string sweep_to_csv(const Economy& econ, const SweepResult& result) {
    std::ostringstream os;
    os << "cap_fraction,policy,branch_id,bradso_charged,detectable_priority_reversals,"
          "priority_reversals\n";
    for (const auto& row : result.rows)
        os << row.cap_fraction << "," << row.policy << ","
           << (row.branch ? econ.branch_name(*row.branch) : "ALL") << "," << row.bradso_charged
           << "," << row.detectable_priority_reversals << "," << row.priority_reversals << "\n";
    return os.str();
}

// Plot-friendly aggregate: one series of total BRADSOs charged per policy.
inline json sweep_to_plot_json(const SweepResult& result, const SweepGrid& grid) {
    json out;
    out["x"] = grid.cap_fractions;
    out["series"] = json::array();
    for (const auto& choice : grid.policies) {
        const std::string name =
            choice.variant == PolicyVariant::Custom ? "custom" : to_string(choice.variant);
        json series;
        series["policy"] = name;
        series["bradso_charged"] = json::array();
        for (double f : grid.cap_fractions)
            for (const auto& row : result.rows)
                if (!row.branch && row.policy == name && row.cap_fraction == f)
                    series["bradso_charged"].push_back(row.bradso_charged);
        out["series"].push_back(std::move(series));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Game files

namespace io_detail {

inline Rational parse_rational(const json& j, const std::string& what) {
    if (j.is_number_integer()) return Rational{j.get<long long>()};
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        const auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rational{std::stoll(s)};
            return Rational{std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
        } catch (const std::exception&) {
        }
    }
    throw Error("game.parse", what + " must be an integer or a 'p/q' string");
}

}  // namespace io_detail

// Parses a single-branch game file: branch, quota, cadets in priority order,
// and a type table per cadet with exact probabilities and utilities.
inline BayesianGame load_game(const std::filesystem::path& path) {
    const json j = json::parse(io_detail::read_file(path));
    const std::string branch = j.value("branch", std::string("b"));
    std::vector<std::string> cadets = j.at("cadets").get<std::vector<std::string>>();
    std::vector<std::string> priority =
        j.contains("priority") ? j.at("priority").get<std::vector<std::string>>() : cadets;
    const int n = static_cast<int>(cadets.size());
    std::vector<CadetId> order;
    for (const auto& name : priority) {
        const auto it = std::find(cadets.begin(), cadets.end(), name);
        if (it == cadets.end()) throw Error("game.parse", "priority names unknown cadet '" + name + "'");
        order.push_back(CadetId{static_cast<int>(it - cadets.begin())});
    }
    auto pi = BaselinePriority::from_order(BranchId{0}, order);
    BranchQuota quota{j.at("quota").at("total").get<int>(),
                      j.at("quota").at("bradso_cap").get<int>()};
    const std::string variant = j.value("policy_variant", std::string("ultimate"));
    if (variant != "ultimate")
        throw Error("game.parse", "game files support the ultimate policy only");
    Economy econ = Economy::make(cadets, {branch}, {quota}, {pi}, {ultimate_policy(pi)});

    std::vector<std::vector<CadetType>> types(n);
    for (int i = 0; i < n; ++i) {
        const json& table = j.at("types").at(cadets[i]);
        for (const auto& t : table) {
            CadetType type;
            type.probability = io_detail::parse_rational(t.at("probability"), "probability");
            type.u_base = io_detail::parse_rational(t.at("utility").at("base"), "utility.base");
            type.u_increased =
                io_detail::parse_rational(t.at("utility").at("bradso"), "utility.bradso");
            type.u_unmatched =
                io_detail::parse_rational(t.at("utility").at("unmatched"), "utility.unmatched");
            types[i].push_back(type);
        }
    }
    return BayesianGame::make(std::move(econ), std::move(types));
}

// ---------------------------------------------------------------------------
// Synthetic generation

// Deterministic RNG with portable bounded draws; the engine's output sequence
// is fixed by the standard, and the derived draws avoid the unspecified
// std::uniform_* distributions so bundles are byte-identical across builds.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (int k = static_cast<int>(v.size()) - 1; k > 0; --k)
            std::swap(v[k], v[uniform_int(0, k)]);
    }

private:
    std::mt19937_64 engine_;
};

struct GeneratorConfig {
    int cadets = 100;
    int branches = 3;
    int quota_min = 10;  // per-branch totals drawn uniformly from this range
    int quota_max = 40;
    double bradso_cap_fraction = 0.25;          // cap = floor(fraction * total)
    std::vector<double> tier_shares = {0.25, 0.5, 0.25};
    int pref_len_min = 1;  // acceptable branch count per cadet
    int pref_len_max = 3;
    double willingness_rate = 0.3;  // chance a ranked branch also gets a BRADSO entry
    std::uint64_t seed = 1;
    std::string regime = "com-bradso";
    std::string policy_variant = "ultimate";
};

inline InstanceBundle generate(const GeneratorConfig& cfg) {
    if (cfg.cadets <= 0 || cfg.branches <= 0)
        throw Error("generate.config", "cadet and branch counts must be positive");
    if (cfg.quota_min < 1 || cfg.quota_max < cfg.quota_min)
        throw Error("generate.config", "invalid quota range");
    if (cfg.pref_len_min < 0 || cfg.pref_len_max < cfg.pref_len_min)
        throw Error("generate.config", "invalid preference length range");
    double share_sum = 0;
    for (double s : cfg.tier_shares) {
        if (s < 0) throw Error("generate.config", "tier shares must be non-negative");
        share_sum += s;
    }
    if (cfg.tier_shares.empty() || std::abs(share_sum - 1.0) > 1e-9)
        throw Error("generate.config", "tier shares must sum to 1");

    Rng rng(cfg.seed);
    InstanceBundle bundle;
    std::vector<std::string> cadet_names, branch_names;
    for (int i = 0; i < cfg.cadets; ++i) cadet_names.push_back("c" + std::to_string(i + 1));
    for (int b = 0; b < cfg.branches; ++b) branch_names.push_back("B" + std::to_string(b + 1));

    std::vector<BranchQuota> quotas;
    for (int b = 0; b < cfg.branches; ++b) {
        const int total = rng.uniform_int(cfg.quota_min, cfg.quota_max);
        quotas.push_back({total, static_cast<int>(cfg.bradso_cap_fraction * total)});
    }

    // Per-branch tiers, then a priority order consistent with them: tiers in
    // order, cadets shuffled within each tier.
    std::vector<BaselinePriority> priorities;
    std::vector<std::vector<int>> tier_of(cfg.branches, std::vector<int>(cfg.cadets));
    Manifest manifest;
    manifest.format_version = 1;
    manifest.regime = cfg.regime;
    manifest.policy_variant = cfg.policy_variant;
    manifest.seed = cfg.seed;
    for (int b = 0; b < cfg.branches; ++b) {
        std::vector<std::vector<CadetId>> groups(cfg.tier_shares.size());
        std::vector<int> counts(cfg.tier_shares.size(), 0);
        for (int i = 0; i < cfg.cadets; ++i) {
            const double u = rng.uniform01();
            double acc = 0;
            int tier = static_cast<int>(cfg.tier_shares.size()) - 1;
            for (std::size_t t = 0; t < cfg.tier_shares.size(); ++t) {
                acc += cfg.tier_shares[t];
                if (u < acc) {
                    tier = static_cast<int>(t);
                    break;
                }
            }
            tier_of[b][i] = tier;
            groups[tier].push_back(CadetId{i});
            ++counts[tier];
        }
        manifest.tier_counts.push_back(counts);
        std::vector<CadetId> order;
        for (auto& g : groups) {
            rng.shuffle(g);
            order.insert(order.end(), g.begin(), g.end());
        }
        priorities.push_back(BaselinePriority::from_order(BranchId{b}, order));
    }

    std::vector<TierAssignment> tiers;
    for (int b = 0; b < cfg.branches; ++b)
        tiers.push_back(TierAssignment::make(priorities[b], tier_of[b]));

    std::vector<BradsoPolicy> policies;
    for (int b = 0; b < cfg.branches; ++b) {
        if (cfg.policy_variant == "ultimate")
            policies.push_back(ultimate_policy(priorities[b]));
        else if (cfg.policy_variant == "tier2020")
            policies.push_back(tiered_policy(priorities[b], tiers[b], TieredVariant::Tier2020));
        else if (cfg.policy_variant == "tier2021")
            policies.push_back(tiered_policy(priorities[b], tiers[b], TieredVariant::Tier2021));
        else
            throw Error("generate.config", "unknown policy variant '" + cfg.policy_variant + "'");
    }

    bundle.economy = Economy::make(cadet_names, branch_names, quotas, priorities, policies);
    bundle.tiers = std::move(tiers);
    bundle.manifest = std::move(manifest);

    for (int i = 0; i < cfg.cadets; ++i) {
        const int len = std::min(cfg.branches, rng.uniform_int(cfg.pref_len_min, cfg.pref_len_max));
        std::vector<BranchId> all;
        for (int b = 0; b < cfg.branches; ++b) all.push_back(BranchId{b});
        rng.shuffle(all);
        std::vector<std::pair<BranchId, Cost>> entries;
        for (int k = 0; k < len; ++k) entries.emplace_back(all[k], Cost::Base);
        for (int k = 0; k < len; ++k) {
            if (rng.uniform01() >= cfg.willingness_rate) continue;
            const BranchId b = all[k];
            std::size_t base_pos = 0;
            for (std::size_t p = 0; p < entries.size(); ++p)
                if (entries[p] == std::make_pair(b, Cost::Base)) base_pos = p;
            const int pos =
                rng.uniform_int(static_cast<int>(base_pos) + 1, static_cast<int>(entries.size()));
            entries.insert(entries.begin() + pos, {b, Cost::Increased});
        }
        bundle.contract_prefs.push_back(ContractPreference::make(CadetId{i}, entries));
    }
    return bundle;
}

}  // namespace cbm
