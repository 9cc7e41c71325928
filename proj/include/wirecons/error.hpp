// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace wirecons {

/// A configuration value is out of its allowed range or missing. The message
/// names the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(field)
    {
    }
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A function was called with arguments outside its domain.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// No leader could be chosen; the consensus round is skipped.
class RoundSkipError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every round failed, so there is no consensus duration to average.
class UndefinedThroughputError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Reading or writing a file failed.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(path)
    {
    }
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace wirecons
