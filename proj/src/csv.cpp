// SPDX-License-Identifier: Apache-2.0
//
// masc - Mars integrated sensing and communication simulation library
// Copyright (C) 2026 The masc authors
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

#include "masc/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace masc
{
    CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    CsvTable &CsvTable::row()
    {
        if (!rows_.empty() && rows_.back().size() != header_.size())
            throw std::logic_error("CsvTable: previous row has " + std::to_string(rows_.back().size()) +
                                   " fields, header has " + std::to_string(header_.size()));
        rows_.emplace_back();
        return *this;
    }

    CsvTable &CsvTable::add(const std::string &field)
    {
        if (rows_.empty())
            throw std::logic_error("CsvTable: add() before row()");
        rows_.back().push_back(field);
        return *this;
    }

    CsvTable &CsvTable::add(double v) { return add(format_double(v)); }
    CsvTable &CsvTable::add(int v) { return add(std::to_string(v)); }
    CsvTable &CsvTable::add(long long v) { return add(std::to_string(v)); }
    CsvTable &CsvTable::add(bool v) { return add(std::string(v ? "1" : "0")); }

    std::string CsvTable::format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    std::string CsvTable::quote(const std::string &f)
    {
        if (f.find_first_of(",\"\n\r") == std::string::npos)
            return f;
        std::string out = "\"";
        for (char c : f)
        {
            if (c == '"')
                out += '"';
            out += c;
        }
        return out + "\"";
    }

    std::string CsvTable::str() const
    {
        std::string out;
        auto line = [&](const std::vector<std::string> &fields)
        {
            for (size_t i = 0; i < fields.size(); ++i)
            {
                if (i)
                    out += ',';
                out += quote(fields[i]);
            }
            out += '\n';
        };
        line(header_);
        for (const auto &r : rows_)
        {
            if (r.size() != header_.size())
                throw std::logic_error("CsvTable: row width does not match header");
            line(r);
        }
        return out;
    }

    void CsvTable::write(const std::string &path) const
    {
        const std::string body = str();
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot write '" + path + "'");
        f.write(body.data(), std::streamsize(body.size()));
        if (!f)
            throw std::runtime_error("write failed for '" + path + "'");
    }
}
