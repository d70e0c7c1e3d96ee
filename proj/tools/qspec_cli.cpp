#include "qspec/runner.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"qspec: frequency-dispersed nonlinear optical signals of multilevel systems "
                 "driven by quantized light"};
    std::string config_path;
    qspec::RunOptions opts;
    app.add_option("--config", config_path, "path to the run config (TOML-style)")
        ->required();
    app.add_option("--out", opts.out_dir, "output directory (overrides [output].dir)");
    app.add_option("--threads", opts.threads, "worker threads for grid sweeps")
        ->check(CLI::PositiveNumber);
    app.add_flag("--verbose", opts.verbose, "print progress to stderr");
    CLI11_PARSE(app, argc, argv);

    try {
        qspec::Config cfg = qspec::Config::parse_file(config_path);
        const std::string csv = qspec::run_config(cfg, opts);
        if (opts.verbose) std::cerr << "wrote " << csv << "\n";
        std::cout << csv << "\n";
        return 0;
    } catch (const qspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qspec::SizeError& e) {
        std::cerr << "size error: " << e.what() << "\n";
        return 3;
    } catch (const qspec::UnsupportedRepresentationError& e) {
        std::cerr << "unsupported representation: " << e.what() << "\n";
        return 4;
    } catch (const qspec::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 5;
    } catch (const qspec::ArgumentError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
