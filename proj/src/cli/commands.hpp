#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "rieszflow/quad.hpp"

namespace rieszflow::cli {

struct RunConfig {
    std::string subcommand;
    std::optional<std::filesystem::path> map_file;
    std::string target = "sin-abs-gaussian";
    std::size_t n = 10;
    QuadSettings quad;
    std::size_t iters = 2000;
    double lr = 1e-2;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> out;
};

// Exit codes: 0 success, 1 parse/IO error (nothing written), 2 inconclusive certificate.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

/// Prints the certificate JSON; also writes certificate.json when cfg.out is set.
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Expands the target in the map's basis (identity when no map is given);
/// writes expansion.json and convergence.csv (N,l2_error for N = 1..n).
int cmd_approximate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Optimizes the map (template from --map, else the seeded default flow);
/// writes map.json and trace.csv (iter,l2_error).
int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// fig1_target.csv, fig2_map.csv, fig3_convergence.csv, fig4_bases.csv. Runs
/// the optimizer first when no map file is given (and writes map.json).
int cmd_figures(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv with CLI11 and dispatches.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rieszflow::cli
