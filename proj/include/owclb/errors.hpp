// SPDX-License-Identifier: Apache-2.0
//
// owclb - bandwidth-limited optical wireless link modelling and spectrum optimization
// Copyright (C) 2026 The owclb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace owclb
{
    /// Base class of every error thrown by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// A value violates a type invariant (negative corner, empty chain, ...).
    class InvalidArgument : public Error
    {
    public:
        using Error::Error;
    };

    /// Frequency outside the support of a tabulated response.
    class RangeError : public Error
    {
    public:
        using Error::Error;
    };

    /// The chain contains a stage that has no real pole-zero form.
    class NotReducibleError : public Error
    {
    public:
        using Error::Error;
    };

    /// An f_max-parameterised operation was called on a GNR that is not
    /// monotonically non-increasing on the requested band.
    class NonMonotoneError : public Error
    {
    public:
        using Error::Error;
    };

    /// Iterative solver hit its iteration cap. Carries the iterate history.
    class ConvergenceError : public Error
    {
    public:
        ConvergenceError(const std::string &what, std::vector<double> trace)
            : Error(what), trace_(std::move(trace)) {}

        const std::vector<double> &trace() const noexcept { return trace_; }

    private:
        std::vector<double> trace_;
    };

    /// Malformed input file (JSON or CSV). The message names the field or line.
    class ParseError : public Error
    {
    public:
        using Error::Error;
    };
}
