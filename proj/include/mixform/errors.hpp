/*
 Copyright 2026 The mixform Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef MIXFORM_ERRORS_HPP
#define MIXFORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mixform {

// Invalid physical parameters, formation specs, gains or sim settings.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A passive-active arm was given an initial condition outside the
// stationary-start hypothesis (nonzero velocity or |q2(0)| > pi).
class AssumptionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NumericInputError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised by the integrator when the state stops being finite.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t agent, double time, const std::string& what)
        : std::runtime_error(what), agent_(agent), time_(time) {}

    std::size_t agent() const noexcept { return agent_; }
    double time() const noexcept { return time_; }

private:
    std::size_t agent_;
    double time_;
};

} // namespace mixform

#endif // MIXFORM_ERRORS_HPP
