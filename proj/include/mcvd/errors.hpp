/*
   Copyright 2026 The mcvd Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcvd {

/// Argument outside the mathematical domain of a formula (e.g. t <= 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Structurally invalid argument (inverted interval, mismatched receiver).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Rejected configuration. Carries every violated invariant, not just the
/// first one found.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems))
    {
    }

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& problems)
    {
        std::string out = "invalid configuration";
        for (const auto& p : problems) {
            out += "\n  - ";
            out += p;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

/// A closed-form approximation broke down. The intermediates that led
/// there are attached for inspection.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::map<std::string, double> intermediates)
        : std::runtime_error(what), intermediates_(std::move(intermediates))
    {
    }

    const std::map<std::string, double>& intermediates() const noexcept
    {
        return intermediates_;
    }

private:
    std::map<std::string, double> intermediates_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mcvd
