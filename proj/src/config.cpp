#include "gpfc/config.hpp"

#include <fstream>
#include <istream>
#include <sstream>

namespace gpfc {

namespace {

template <typename T>
T parse_value(const std::string& key, const std::string& text, int line_no) {
    std::istringstream is(text);
    T value{};
    std::string rest;
    if (!(is >> value) || (is >> rest)) {
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": bad value for " + key);
    }
    return value;
}

}  // namespace

TrainConfig read_train_config(std::istream& in, TrainConfig cfg) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key;
        std::istringstream(line.substr(0, eq)) >> key;
        const std::string value = line.substr(eq + 1);
        if (key == "max_iterations") {
            cfg.max_iterations = parse_value<int>(key, value, line_no);
        } else if (key == "grad_tolerance") {
            cfg.grad_tolerance = parse_value<double>(key, value, line_no);
        } else if (key == "objective_tolerance") {
            cfg.objective_tolerance = parse_value<double>(key, value, line_no);
        } else if (key == "restarts") {
            cfg.restarts = parse_value<int>(key, value, line_no);
        } else if (key == "seed") {
            cfg.seed = parse_value<std::uint64_t>(key, value, line_no);
        } else if (key == "parallel_kernels") {
            cfg.exec = parse_value<int>(key, value, line_no) != 0 ? Exec::Parallel : Exec::Serial;
        } else {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key " + key);
        }
    }
    cfg.validate();
    return cfg;
}

TrainConfig load_train_config(const std::string& path, TrainConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    return read_train_config(in, base);
}

}  // namespace gpfc
