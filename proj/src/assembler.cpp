// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/minivm.hpp"

#include <cctype>

namespace frforge::minivm
{
namespace
{
std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool is_label_name(std::string_view s)
{
    if (s.empty())
        return false;
    for (const char c : s)
    {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.')
            return false;
    }
    return true;
}
}  // namespace

AssembledCode assemble(std::string_view source)
{
    struct Pending
    {
        std::size_t index;
        std::string label;
        std::size_t line;
    };

    AssembledCode out;
    std::vector<Pending> fixups;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size())
    {
        auto nl = source.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = source.size();
        auto line = source.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;

        if (const auto sc = line.find(';'); sc != std::string_view::npos)
            line = line.substr(0, sc);
        line = trim(line);

        if (const auto colon = line.find(':'); colon != std::string_view::npos)
        {
            const auto name = trim(line.substr(0, colon));
            if (!is_label_name(name))
                throw FormatError("line " + std::to_string(line_no) + ": bad label");
            if (!out.labels.emplace(std::string(name), static_cast<std::uint32_t>(out.code.size())).second)
                throw FormatError("line " + std::to_string(line_no) + ": duplicate label " + std::string(name));
            line = trim(line.substr(colon + 1));
        }
        if (line.empty())
            continue;

        const auto sp = line.find(' ');
        const auto head = line.substr(0, sp);
        if (head == "PUSH")
        {
            if (sp == std::string_view::npos)
                throw FormatError("line " + std::to_string(line_no) + ": PUSH needs an operand");
            const auto operand = trim(line.substr(sp + 1));
            Instruction ins{Opcode::PUSH};
            if (!operand.empty() && operand[0] == '@')
                fixups.push_back({out.code.size(), std::string(operand.substr(1)), line_no});
            else
            {
                try
                {
                    ins.value = parse_word(operand);
                }
                catch (const FormatError& e)
                {
                    throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
                }
            }
            out.code.push_back(ins);
            continue;
        }
        try
        {
            out.code.push_back(parse_mnemonic(line));
        }
        catch (const FormatError& e)
        {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }

    for (const auto& f : fixups)
    {
        const auto it = out.labels.find(f.label);
        if (it == out.labels.end())
            throw FormatError("line " + std::to_string(f.line) + ": undefined label " + f.label);
        out.code[f.index].value = it->second;
    }
    return out;
}

std::string disassemble(const std::vector<Instruction>& code)
{
    std::string out;
    for (const auto& ins : code)
    {
        out += ins.text();
        out += '\n';
    }
    return out;
}

}  // namespace frforge::minivm
