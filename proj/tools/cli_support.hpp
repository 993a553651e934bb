// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

// Output plumbing for the command-line tool: numeric formatting, CSV and
// JSON artifacts, the run manifest and optional SVG renderings.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace scarkit::cli {

/// Bad user input; `key` names the offending option or config key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// 15 significant digits; NaN prints as an empty field, infinities as "inf" / "-inf".
[[nodiscard]] std::string num(double value);
/// The value rounded to 15 significant digits, for JSON output.
[[nodiscard]] double round15(double value);

using CsvRow = std::vector<std::string>;

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Where one invocation writes its files, and what it has written.
class Artifacts {
public:
    Artifacts(std::filesystem::path directory, bool svg);

    [[nodiscard]] const std::filesystem::path& directory() const noexcept { return dir_; }
    [[nodiscard]] bool svg() const noexcept { return svg_; }
    [[nodiscard]] const std::vector<std::string>& written() const noexcept { return written_; }

    void csv(const std::string& name, const CsvRow& header, const std::vector<CsvRow>& rows);
    void text(const std::string& name, const std::string& content);
    void json(const std::string& name, const nlohmann::json& value);
    /// Line chart; skipped unless SVG output is enabled.
    void line_chart(const std::string& name, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<Series>& series);
    /// Heat map of log10(values) on a regular grid; NaN or infinite cells are drawn white.
    void heat_map(const std::string& name, const std::string& title, int nx, int ny,
                  const std::vector<double>& values);

private:
    std::filesystem::path dir_;
    bool svg_;
    std::vector<std::string> written_;
};

}  // namespace scarkit::cli
