#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "cli/report.hpp"
#include "expanse/error.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expansive constants, Lebesgue numbers and their decay rates"};
    app.set_version_flag("--version", std::string(expanse::cli::kToolVersion));
    app.require_subcommand(1);

    expanse::cli::Params params;
    std::string format = "json";
    std::string out_path;
    std::string grid_list;

    for (const char* name : {"sft", "torus", "sampled", "verify"}) {
        const char* help = std::string_view(name) == "sft"       ? "Exact gamma, witnesses and Lebesgue numbers of a subshift"
                           : std::string_view(name) == "torus"   ? "Upper/lower gamma brackets for a toral automorphism"
                           : std::string_view(name) == "sampled" ? "Estimates on a finite sampled system"
                                                                 : "Run the inequality checks and report";
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--spec", params.spec, "System spec file, or inline JSON")->required();
        sub->add_option("--n-max", params.n_max, "Largest power n");
        sub->add_option("--grid", grid_list, "Grid denominators Q[,Q...]");
        sub->add_option("--horizon", params.horizon, "Orbit horizon K for sampled systems");
        sub->add_option("--tail", params.tail, "Tail window fraction in (0,1)");
        sub->add_option("--format", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--out", out_path, "Output path (default stdout)");
        sub->add_flag("--log2", params.log2, "Show logarithmic quantities in base 2");
        sub->add_option("--gamma1", params.gamma1, "Manual lower bound on gamma(f) for torus brackets");
        sub->add_flag("--unsafe", params.unsafe, "Lift the size caps");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        const auto* sub = app.get_subcommands().front();
        for (int i = 1; i < argc; ++i) params.argv.emplace_back(argv[i]);
        if (!grid_list.empty()) {
            std::stringstream ss(grid_list);
            std::string item;
            while (std::getline(ss, item, ',')) {
                std::size_t used = 0;
                int q = 0;
                try {
                    q = std::stoi(item, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used == 0 || used != item.size()) {
                    throw expanse::InvalidInput("expected integers separated by commas", "grid");
                }
                params.grids.push_back(q);
            }
        }
        const auto result = expanse::cli::execute_command(sub->get_name(), params);
        const auto fmt = expanse::cli::format_from_string(format);
        if (out_path.empty()) {
            expanse::cli::write_report(result.doc, fmt, std::cout);
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw expanse::Error("cannot open output '" + out_path + "'");
            expanse::cli::write_report(result.doc, fmt, out);
        }
        if (result.exit_code != 0) {
            std::cerr << "expanse: check failed:";
            for (const auto& name : result.doc.at("failing")) std::cerr << " " << name.get<std::string>();
            std::cerr << "\n";
        }
        return result.exit_code;
    } catch (const expanse::InvalidInput& e) {
        std::cerr << "expanse: invalid input: " << e.what() << "\n";
        return kExitInput;
    } catch (const expanse::InternalError& e) {
        std::cerr << "expanse: internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "expanse: error: " << e.what() << "\n";
        return kExitInternal;
    }
}
