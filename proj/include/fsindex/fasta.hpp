#pragma once

#include <cctype>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsi {

struct SequenceRecord {
    std::string id;          // accession: first token of the header
    std::string description; // remainder of the header
    std::string residues;    // upper-cased letters, whitespace stripped
};

/// Plain FASTA: '>' headers, sequence lines.  Letters are upper-cased.
/// Rejects empty input and sequence data before the first header.
inline std::vector<SequenceRecord> parseFasta(std::istream& in) {
    std::vector<SequenceRecord> records;
    std::string line;
    bool sawHeader = false;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
            line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '>') {
            sawHeader = true;
            SequenceRecord rec;
            std::istringstream hs(line.substr(1));
            hs >> rec.id;
            std::getline(hs, rec.description);
            std::size_t first = rec.description.find_first_not_of(" \t");
            rec.description = first == std::string::npos ? "" : rec.description.substr(first);
            if (rec.id.empty())
                throw std::runtime_error("fasta: empty record header");
            records.push_back(std::move(rec));
        } else {
            if (!sawHeader)
                throw std::runtime_error("fasta: sequence data before first '>' header");
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c)))
                    records.back().residues += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
    }
    if (records.empty())
        throw std::runtime_error("fasta: no records");
    return records;
}

inline std::vector<SequenceRecord> parseFasta(const std::string& text) {
    std::istringstream in(text);
    return parseFasta(in);
}

} // namespace fsi
