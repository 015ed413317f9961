// macanon: anonymize MAC addresses into k-anonymous buckets and plan or
// verify the digest widths that keep collision rates acceptable.
//
// Exit codes: 0 success, 2 usage error, 3 startup/environment error,
// 4 finished with per-record failures.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "macanon/anonymize.hpp"
#include "macanon/collision.hpp"
#include "macanon/csv.hpp"
#include "macanon/errors.hpp"
#include "macanon/hex.hpp"
#include "macanon/mac.hpp"
#include "macanon/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitStartup = 3;
constexpr int kExitPartial = 4;

using macanon::AnonymizationPolicy;
using macanon::BucketDigest;
using macanon::KdfParams;

struct AnonymizeOptions {
    std::string config_path;
    std::string input_path;   // empty = stdin
    std::string output_path;  // empty = stdout
    std::string input_format = "lines";
    std::string output_format = "jsonl";
    std::string mac_column = "mac";
    std::string salt_hex;
    std::string salt_file;
    std::string salt_file_format = "auto";
    bool allow_short_salt = false;
    bool decimal = false;
    int digest_bits = 24;
    KdfParams kdf;
};

// Flags win over the config file; the file wins over the environment. CLI11
// reports which flags the user actually passed, so the file only fills the
// gaps.
void merge_config_file(AnonymizeOptions& opt, const CLI::App* cmd) {
    std::ifstream in(opt.config_path);
    if (!in) throw macanon::ValidationError("cannot open config file \"" + opt.config_path + "\"");
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::exception& e) {
        throw macanon::ValidationError("config file \"" + opt.config_path + "\": " + e.what());
    }

    auto unset = [&](const char* flag) { return cmd->get_option(flag)->count() == 0; };
    auto take_str = [&](const nlohmann::json& node, const char* key, std::string& dst,
                        const char* flag) {
        if (node.contains(key) && unset(flag)) dst = node.at(key).get<std::string>();
    };

    if (cfg.contains("digest_bits") && unset("--bits"))
        opt.digest_bits = cfg.at("digest_bits").get<int>();
    take_str(cfg, "salt_hex", opt.salt_hex, "--salt-hex");
    take_str(cfg, "salt_file", opt.salt_file, "--salt-file");
    take_str(cfg, "salt_file_format", opt.salt_file_format, "--salt-file-format");
    take_str(cfg, "input_format", opt.input_format, "--input-format");
    take_str(cfg, "output_format", opt.output_format, "--output-format");
    take_str(cfg, "mac_column", opt.mac_column, "--mac-column");
    if (cfg.contains("allow_short_salt") && unset("--allow-short-salt"))
        opt.allow_short_salt = cfg.at("allow_short_salt").get<bool>();
    if (cfg.contains("kdf")) {
        const auto& kdf = cfg.at("kdf");
        take_str(kdf, "algorithm", opt.kdf.algorithm, "--kdf-algorithm");
        if (kdf.contains("memory_cost_kib") && unset("--memory-cost-kib"))
            opt.kdf.memory_cost_kib = kdf.at("memory_cost_kib").get<std::uint32_t>();
        if (kdf.contains("time_cost") && unset("--time-cost"))
            opt.kdf.time_cost = kdf.at("time_cost").get<std::uint32_t>();
        if (kdf.contains("parallelism") && unset("--kdf-parallelism"))
            opt.kdf.parallelism = kdf.at("parallelism").get<std::uint32_t>();
        if (kdf.contains("output_length") && unset("--kdf-output-length"))
            opt.kdf.output_length = kdf.at("output_length").get<std::uint32_t>();
    }
}

macanon::Salt resolve_salt(const AnonymizeOptions& opt) {
    if (!opt.salt_hex.empty()) return macanon::salt_from_hex(opt.salt_hex);
    if (!opt.salt_file.empty()) {
        auto format = macanon::SaltFileFormat::kAuto;
        if (opt.salt_file_format == "raw") format = macanon::SaltFileFormat::kRaw;
        else if (opt.salt_file_format == "hex") format = macanon::SaltFileFormat::kHex;
        return macanon::salt_from_file(opt.salt_file, format);
    }
    return macanon::salt_from_env();
}

std::string bucket_field(const BucketDigest& digest, bool decimal) {
    return decimal ? digest.decimal() : digest.hex();
}

int run_anonymize_lines(std::istream& in, std::ostream& out, macanon::BucketHasher& hasher,
                        const AnonymizeOptions& opt) {
    std::string line;
    std::size_t record = 0;
    bool partial = false;
    if (opt.output_format == "csv") out << "bucket,bits\n";
    while (std::getline(in, line)) {
        ++record;
        std::string_view text = line;
        while (!text.empty() && (text.back() == '\r' || text.back() == ' ' || text.back() == '\t'))
            text.remove_suffix(1);
        while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
            text.remove_prefix(1);
        if (text.empty()) continue;
        try {
            const BucketDigest digest = hasher(macanon::parse_mac(text));
            if (opt.output_format == "csv") {
                out << bucket_field(digest, opt.decimal) << ',' << digest.bits << '\n';
            } else {
                nlohmann::ordered_json j;
                j["bucket"] = digest.hex();
                j["bits"] = digest.bits;
                if (opt.decimal) j["value"] = digest.value;
                out << j.dump() << '\n';
            }
        } catch (const macanon::ParseError& e) {
            std::cerr << "record " << record << ": " << e.what() << '\n';
            partial = true;
        }
    }
    return partial ? kExitPartial : kExitOk;
}

int run_anonymize_csv(std::istream& in, std::ostream& out, macanon::BucketHasher& hasher,
                      const AnonymizeOptions& opt) {
    macanon::CsvReader reader(in);
    const auto header = reader.next();
    if (!header) throw macanon::ValidationError("CSV input is empty (no header row)");
    std::size_t mac_index = header->size();
    for (std::size_t i = 0; i < header->size(); ++i)
        if ((*header)[i] == opt.mac_column) mac_index = i;
    if (mac_index == header->size())
        throw macanon::ValidationError("CSV header has no \"" + opt.mac_column + "\" column");

    const bool csv_out = opt.output_format == "csv";
    if (csv_out) {
        auto out_header = *header;
        out_header[mac_index] = "bucket";
        macanon::write_csv_row(out, out_header);
    }

    bool partial = false;
    while (auto row = reader.next()) {
        const std::size_t record = reader.records_read() - 1;  // header was record 1
        if (row->size() != header->size()) {
            std::cerr << "record " << record << ": expected " << header->size()
                      << " fields, got " << row->size() << '\n';
            partial = true;
            continue;
        }
        try {
            const BucketDigest digest = hasher(macanon::parse_mac((*row)[mac_index]));
            if (csv_out) {
                (*row)[mac_index] = bucket_field(digest, opt.decimal);
                macanon::write_csv_row(out, *row);
            } else {
                nlohmann::ordered_json j;
                j["bucket"] = digest.hex();
                j["bits"] = digest.bits;
                if (opt.decimal) j["value"] = digest.value;
                for (std::size_t i = 0; i < header->size(); ++i)
                    if (i != mac_index) j[(*header)[i]] = (*row)[i];
                out << j.dump() << '\n';
            }
        } catch (const macanon::ParseError& e) {
            std::cerr << "record " << record << ": " << e.what() << '\n';
            partial = true;
        }
    }
    return partial ? kExitPartial : kExitOk;
}

void add_kdf_flags(CLI::App* cmd, KdfParams& kdf) {
    cmd->add_option("--kdf-algorithm", kdf.algorithm, "argon2d (default), argon2id or argon2i");
    cmd->add_option("--memory-cost-kib", kdf.memory_cost_kib, "KDF memory cost in KiB");
    cmd->add_option("--time-cost", kdf.time_cost, "KDF pass count");
    cmd->add_option("--kdf-parallelism", kdf.parallelism, "KDF lane count");
    cmd->add_option("--kdf-output-length", kdf.output_length, "KDF digest length in bytes");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-anonymous MAC address bucketization"};
    app.require_subcommand(1);

    // ---- plan ----------------------------------------------------------
    std::uint64_t plan_count = 0;
    double plan_rate = 0.01;
    std::string plan_semantics = "overall-rate";
    auto* plan = app.add_subcommand("plan", "digest width for a dataset size and collision budget");
    plan->add_option("--count", plan_count, "expected number of unique addresses")->required();
    plan->add_option("--max-rate", plan_rate, "tolerated collision probability")->required();
    plan->add_option("--semantics", plan_semantics,
                     "overall-rate (fraction of colliding addresses) or at-least-one")
        ->check(CLI::IsMember({"overall-rate", "at-least-one"}));

    // ---- tables --------------------------------------------------------
    int tables_which = 1;
    std::string tables_format = "text";
    auto* tables = app.add_subcommand("tables", "regenerate the digest-width planning tables");
    tables->add_option("--table", tables_which, "1 = at-least-one approximation, 2 = exact rate")
        ->check(CLI::IsMember({1, 2}))
        ->required();
    tables->add_option("--format", tables_format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));

    // ---- anonymize -----------------------------------------------------
    AnonymizeOptions anon;
    auto* anonymize = app.add_subcommand("anonymize", "replace MAC addresses with bucket digests");
    anonymize->add_option("--config", anon.config_path, "JSON config file (flags override it)");
    anonymize->add_option("--input", anon.input_path, "input path (default: stdin)");
    anonymize->add_option("--output", anon.output_path, "output path (default: stdout)");
    anonymize->add_option("--input-format", anon.input_format, "lines or csv")
        ->check(CLI::IsMember({"lines", "csv"}));
    anonymize->add_option("--output-format", anon.output_format, "jsonl or csv")
        ->check(CLI::IsMember({"jsonl", "csv"}));
    anonymize->add_option("--mac-column", anon.mac_column, "CSV column holding the address");
    anonymize->add_option("--bits", anon.digest_bits, "digest width in bits (1..64)");
    anonymize->add_option("--salt-hex", anon.salt_hex, "salt secret as hex");
    anonymize->add_option("--salt-file", anon.salt_file, "file holding the salt secret");
    anonymize->add_option("--salt-file-format", anon.salt_file_format, "auto, raw or hex")
        ->check(CLI::IsMember({"auto", "raw", "hex"}));
    anonymize->add_flag("--allow-short-salt", anon.allow_short_salt,
                        "accept salts down to 8 bytes (production floor is 16)");
    anonymize->add_flag("--decimal", anon.decimal, "emit the bucket in decimal as well");
    add_kdf_flags(anonymize, anon.kdf);

    // ---- simulate ------------------------------------------------------
    macanon::TrialConfig trial;
    bool sim_table3 = false;
    bool sim_skip_100k = false;
    bool sim_per_round = false;
    std::string sim_hash = "fast";
    std::string sim_format = "text";
    std::uint64_t sim_seed = 0;
    auto* simulate = app.add_subcommand("simulate", "empirical collision rates over random addresses");
    simulate->add_option("--count", trial.m, "unique addresses per round");
    simulate->add_option("--bits", trial.digest_bits, "digest width in bits");
    simulate->add_option("--rounds", trial.rounds, "rounds per configuration (default 100)");
    simulate->add_option("--seed", sim_seed, "base seed for the whole run");
    simulate->add_option("--hash", sim_hash, "fast (keyed mixer) or kdf (real pipeline)")
        ->check(CLI::IsMember({"fast", "kdf"}));
    simulate->add_flag("--table3", sim_table3,
                       "run the full 2^13..2^21 grid over m = 100..100,000");
    simulate->add_flag("--skip-100k", sim_skip_100k,
                       "drop the m=100,000 column (cuts the grid runtime ~10x)");
    simulate->add_option("--threads", trial.threads, "worker threads (0 = all cores)");
    simulate->add_option("--format", sim_format, "text, csv or jsonl")
        ->check(CLI::IsMember({"text", "csv", "jsonl"}));
    simulate->add_flag("--per-round", sim_per_round, "include per-round counts in jsonl output");
    std::uint64_t sim_budget_mib = 1024;
    simulate->add_option("--kdf-memory-budget-mib", sim_budget_mib,
                         "memory budget bounding concurrent KDF calls (MiB)");
    add_kdf_flags(simulate, trial.kdf);

    // ---- attack-surface --------------------------------------------------
    std::uint64_t as_prefixes = 0;
    double as_fraction = 0.0;
    int as_planned_bits = 0;
    auto* attack = app.add_subcommand("attack-surface",
                                      "bits needed to enumerate the exposed address space");
    auto* opt_prefixes =
        attack->add_option("--prefixes", as_prefixes, "number of allocated OUI prefixes");
    auto* opt_fraction =
        attack->add_option("--fraction", as_fraction, "allocated fraction of the OUI space");
    opt_prefixes->excludes(opt_fraction);
    attack->add_option("--bits", as_planned_bits, "planned digest width to compare against");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (plan->parsed()) {
            if (plan_count < 2)
                throw macanon::DomainError("--count must be at least 2");
            macanon::PlanResult result;
            if (plan_semantics == "at-least-one") {
                result = macanon::approx_bits_at_least_one(plan_count, plan_rate);
                std::printf("%d bits (n = %.0f buckets), P(at least one collision) <~ %g for m = %llu\n",
                            result.bits, result.buckets, plan_rate,
                            static_cast<unsigned long long>(plan_count));
            } else {
                result = macanon::min_bits_for_rate(plan_count, plan_rate);
                std::printf("%d bits (n = %.0f buckets), predicted collision rate %.4f%% <= %g for m = %llu\n",
                            result.bits, result.buckets, result.predicted_rate * 100.0, plan_rate,
                            static_cast<unsigned long long>(plan_count));
            }
            return kExitOk;
        }

        if (tables->parsed()) {
            const auto table = macanon::generate_table(tables_which);
            std::cout << (tables_format == "csv" ? macanon::render_table_csv(table)
                                                 : macanon::render_table_text(table));
            return kExitOk;
        }

        if (anonymize->parsed()) {
            if (!anon.config_path.empty()) merge_config_file(anon, anonymize);

            AnonymizationPolicy policy;
            policy.kdf = anon.kdf;
            policy.digest_bits = anon.digest_bits;
            policy.allow_short_salt = anon.allow_short_salt;
            policy.salt = resolve_salt(anon);  // before any input is read
            macanon::BucketHasher hasher(std::move(policy));

            std::ifstream file_in;
            if (!anon.input_path.empty()) {
                file_in.open(anon.input_path, std::ios::binary);
                if (!file_in)
                    throw macanon::ValidationError("cannot open input \"" + anon.input_path + "\"");
            }
            std::istream& in = anon.input_path.empty() ? std::cin : file_in;

            std::ofstream file_out;
            if (!anon.output_path.empty()) {
                file_out.open(anon.output_path, std::ios::binary);
                if (!file_out)
                    throw macanon::ValidationError("cannot open output \"" + anon.output_path + "\"");
            }
            std::ostream& out = anon.output_path.empty() ? std::cout : file_out;

            return anon.input_format == "csv" ? run_anonymize_csv(in, out, hasher, anon)
                                              : run_anonymize_lines(in, out, hasher, anon);
        }

        if (simulate->parsed()) {
            trial.hash_mode = sim_hash == "kdf" ? macanon::HashMode::kKdf : macanon::HashMode::kFast;
            trial.base_seed = sim_seed;
            trial.kdf_memory_budget_bytes = sim_budget_mib * 1024 * 1024;
            if (sim_table3) {
                const auto table = macanon::generate_table3(trial.rounds, trial.hash_mode,
                                                            !sim_skip_100k, sim_seed,
                                                            trial.threads, trial.kdf);
                if (sim_format == "csv") std::cout << macanon::render_table3_csv(table);
                else if (sim_format == "jsonl")
                    std::cout << macanon::render_table3_jsonl(table, sim_per_round);
                else std::cout << macanon::render_table3_text(table);
            } else {
                const auto report = macanon::run_experiment(trial);
                if (sim_format == "csv") std::cout << macanon::render_report_csv(report);
                else if (sim_format == "jsonl")
                    std::cout << macanon::render_report_jsonl(report, sim_per_round);
                else std::cout << macanon::render_report_text(report);
            }
            return kExitOk;
        }

        if (attack->parsed()) {
            if ((opt_prefixes->count() == 0) == (opt_fraction->count() == 0))
                throw macanon::DomainError("pass exactly one of --prefixes or --fraction");
            int bits;
            if (opt_prefixes->count() > 0) {
                bits = macanon::coverage_bits(as_prefixes);
                std::printf("%d bits cover %llu OUI prefixes\n", bits,
                            static_cast<unsigned long long>(as_prefixes));
            } else {
                bits = macanon::allocated_space_bits(as_fraction);
                std::printf("%d bits cover an allocated fraction of %g\n", bits, as_fraction);
            }
            if (as_planned_bits > 0) {
                if (as_planned_bits < bits)
                    std::printf("planned digest of %d bits is below the %d-bit exposed space: "
                                "buckets stay ambiguous under enumeration\n",
                                as_planned_bits, bits);
                else
                    std::printf("planned digest of %d bits meets or exceeds the %d-bit exposed "
                                "space: enumeration can single out addresses\n",
                                as_planned_bits, bits);
            }
            return kExitOk;
        }
    } catch (const macanon::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const macanon::CapacityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const macanon::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitStartup;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitStartup;
    }
    return kExitOk;
}
