#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"

#include "cli.hpp"

using namespace crossbell;

namespace {

std::uint64_t default_seed() {
    const char* env = std::getenv("CROSSBELL_SEED");
    if (!env || !*env) return 0;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used);
        if (env[used] == '\0') return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidArgument, std::string("CROSSBELL_SEED is not an unsigned integer: ") + env);
}

} // namespace

int main(int argc, char** argv) {
    cli::RunConfig cfg;
    CLI::App app{"Cross-Bell-basis teleportation simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out, "Write the report here instead of stdout");
        sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    };
    auto seeded = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "PRNG seed (default: $CROSSBELL_SEED or 0)");
    };

    auto* teleport = app.add_subcommand("teleport", "Teleport a client state through a cross-Bell channel");
    teleport->add_option("--n", cfg.n, "Number of slots (defaults to the channel length)");
    teleport->add_option("--channel", cfg.channel, "Channel kinds, e.g. phi+,phi-")->required();
    teleport->add_option("--client", cfg.client, "random | file:PATH | preset:zero|plus|ghz|w");
    teleport->add_option("--mode", cfg.mode, "enumerate or sample")->check(CLI::IsMember({"enumerate", "sample"}));
    teleport->add_option("--trials", cfg.trials, "Samples to draw in sample mode");
    teleport->add_flag("--session", cfg.session, "Run each sample as an Alice/Bob session over a byte pipe");
    seeded(teleport);
    common(teleport);

    auto* verify = app.add_subcommand("verify", "Check the reference tables against derivations and the golden verdicts");
    cfg.tables = std::string(CROSSBELL_DATA_DIR) + "/reference_tables.json";
    cfg.golden = std::string(CROSSBELL_DATA_DIR) + "/verdicts.golden.json";
    verify->add_option("--tables", cfg.tables, "Reference tables JSON");
    verify->add_option("--golden", cfg.golden, "Golden verdicts JSON");
    common(verify);

    auto* basis = app.add_subcommand("basis", "Orthonormality of the cross-Bell basis");
    basis->add_option("--n", cfg.n, "Number of slots (1..5)")->required();
    common(basis);

    auto* expand = app.add_subcommand("expand", "Expand a 2n-qubit state in the cross-Bell basis");
    expand->add_option("--n", cfg.n, "Number of slots (1..5)")->required();
    expand->add_option("--state", cfg.client, "random | file:PATH | preset:zero|plus|ghz|w");
    seeded(expand);
    common(expand);

    try {
        cfg.seed = default_seed();
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitConfig;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    try {
        if (cfg.subcommand == "teleport") return cli::cmd_teleport(cfg, std::cout);
        if (cfg.subcommand == "verify") return cli::cmd_verify(cfg, std::cout, std::cerr);
        if (cfg.subcommand == "basis") return cli::cmd_basis(cfg, std::cout);
        return cli::cmd_expand(cfg, std::cout);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitConfig;
    }
}
