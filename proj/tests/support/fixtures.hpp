#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include "ctmc/parser.hpp"

namespace testsupport {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::filesystem::path fixture_path(const std::string& name) {
    return std::filesystem::path(CTMC_FIXTURE_DIR) / name;
}

inline ctmc::Model parse_fixture(const std::string& name) {
    auto result = ctmc::parse_model(read_file(fixture_path(name)));
    if (auto* error = std::get_if<ctmc::ParseError>(&result))
        throw std::runtime_error(name + ": " + error->to_string());
    return std::get<ctmc::Model>(std::move(result));
}

inline ctmc::Model parse_text(const std::string& text) {
    auto result = ctmc::parse_model(text);
    if (auto* error = std::get_if<ctmc::ParseError>(&result))
        throw std::runtime_error("unexpected parse error: " + error->to_string());
    return std::get<ctmc::Model>(std::move(result));
}

inline const char* kOnOffText =
    "model m\n"
    "state ON up\n"
    "state OFF down\n"
    "rate l = 2\n"
    "rate m = 3\n"
    "trans ON -> OFF : l\n"
    "trans OFF -> ON : m\n";

}  // namespace testsupport
