#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fsi {

// The 20 standard amino acids, in the row/column order of NCBI matrix files.
inline constexpr std::string_view kStandardLetters = "ARNDCQEGHILKMFPSTWYV";

/// A finite, ordered residue alphabet with O(1) symbol->index lookup.
/// Immutable after construction.
class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(std::string_view letters) : letters_(letters) {
        if (letters_.empty())
            throw std::invalid_argument("alphabet: empty letter set");
        lookup_.fill(-1);
        for (std::size_t i = 0; i < letters_.size(); ++i) {
            unsigned char c = static_cast<unsigned char>(letters_[i]);
            if (lookup_[c] >= 0)
                throw std::invalid_argument(std::string("alphabet: duplicate letter '") + letters_[i] + "'");
            lookup_[c] = static_cast<int>(i);
        }
    }

    static const Alphabet& standard() {
        static const Alphabet a{kStandardLetters};
        return a;
    }

    std::size_t size() const { return letters_.size(); }
    const std::string& letters() const { return letters_; }
    char letter(std::size_t i) const { return letters_[i]; }

    /// Index of a symbol, or -1 if it is not in the alphabet.
    int indexOf(char c) const { return lookup_[static_cast<unsigned char>(c)]; }
    bool contains(char c) const { return indexOf(c) >= 0; }

    int indexOrThrow(char c) const {
        int i = indexOf(c);
        if (i < 0)
            throw std::invalid_argument(std::string("letter '") + c + "' is not in alphabet " + letters_);
        return i;
    }

    bool containsAll(std::string_view word) const {
        for (char c : word)
            if (!contains(c)) return false;
        return true;
    }

    bool operator==(const Alphabet& o) const { return letters_ == o.letters_; }
    bool operator!=(const Alphabet& o) const { return !(*this == o); }

private:
    std::string letters_;
    std::array<int, 256> lookup_{};
};

inline bool isStandardLetter(char c) { return Alphabet::standard().contains(c); }

} // namespace fsi
