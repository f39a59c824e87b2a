#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ratings {

// Invalid parameter or request. Maps to CLI exit code 2.
class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Unreadable or unwritable path. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& path, const std::string& what)
        : std::runtime_error(what + ": " + path), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Work beyond a configured cap (e.g. the DP horizon). Maps to CLI exit code 4.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A conditional statistic was requested over an empty condition set.
class EmptyConditionError : public std::runtime_error {
public:
    EmptyConditionError(const std::string& what, std::int64_t survivors, std::int64_t trials)
        : std::runtime_error(what), survivors_(survivors), trials_(trials) {}
    std::int64_t survivors() const { return survivors_; }
    std::int64_t trials() const { return trials_; }

private:
    std::int64_t survivors_;
    std::int64_t trials_;
};

}  // namespace ratings
