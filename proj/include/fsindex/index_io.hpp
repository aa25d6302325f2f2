#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "fsindex/fs_index.hpp"

namespace fsi {

namespace detail {

inline uint32_t crc32Update(uint32_t crc, const void* data, std::size_t len) {
    static const auto table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int k = 0; k < 8; ++k)
                c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    const auto* p = static_cast<const unsigned char*>(data);
    crc ^= 0xffffffffu;
    for (std::size_t i = 0; i < len; ++i)
        crc = table[(crc ^ p[i]) & 0xffu] ^ (crc >> 8);
    return crc ^ 0xffffffffu;
}

inline uint64_t fnv1a64(uint64_t h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

// Little-endian writer that keeps a running CRC32 of the payload.
struct CrcWriter {
    std::ostream& out;
    uint32_t crc = 0;

    void bytes(const void* data, std::size_t len) {
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
        crc = crc32Update(crc, data, len);
    }
    template <typename T> void le(T v) {
        unsigned char buf[sizeof(T)];
        for (std::size_t i = 0; i < sizeof(T); ++i)
            buf[i] = static_cast<unsigned char>((static_cast<uint64_t>(v) >> (8 * i)) & 0xffu);
        bytes(buf, sizeof(T));
    }
};

struct CrcReader {
    std::istream& in;
    uint32_t crc = 0;

    void bytes(void* data, std::size_t len) {
        in.read(static_cast<char*>(data), static_cast<std::streamsize>(len));
        if (static_cast<std::size_t>(in.gcount()) != len)
            throw std::runtime_error("index file: truncated");
        crc = crc32Update(crc, data, len);
    }
    template <typename T> T le() {
        unsigned char buf[sizeof(T)];
        bytes(buf, sizeof(T));
        uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            v |= static_cast<uint64_t>(buf[i]) << (8 * i);
        return static_cast<T>(v);
    }
};

} // namespace detail

/// Hash of the sequence corpus an index was built from; stored in the index
/// file so a reload against the wrong FASTA is rejected.
inline uint64_t storeContentHash(const FragmentStore& store) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (const SequenceRecord& rec : store.records()) {
        h = detail::fnv1a64(h, rec.id.data(), rec.id.size());
        h = detail::fnv1a64(h, "\n", 1);
        h = detail::fnv1a64(h, rec.residues.data(), rec.residues.size());
        h = detail::fnv1a64(h, "\n", 1);
    }
    return h;
}

inline constexpr char kIndexMagic[4] = {'F', 'S', 'I', 'X'};
inline constexpr uint32_t kIndexFormatVersion = 1;

/// Little-endian layout: magic, version, m, alphabet, per-position partition
/// tables, N, n, corpus hash, bin (u64), frag ((u32,u32) pairs), lcp (u8),
/// CRC32 of everything after the version field.
inline void saveIndex(std::ostream& out, const FsIndex& ix) {
    out.write(kIndexMagic, 4);
    unsigned char version[4] = {kIndexFormatVersion & 0xffu, 0, 0, 0};
    out.write(reinterpret_cast<const char*>(version), 4);

    detail::CrcWriter w{out};
    const PartitionScheme& sch = ix.scheme();
    const Alphabet& alpha = sch.alphabet();
    w.le<uint32_t>(static_cast<uint32_t>(sch.fragLength()));
    w.le<uint32_t>(static_cast<uint32_t>(alpha.size()));
    w.bytes(alpha.letters().data(), alpha.size());
    for (std::size_t i = 0; i < sch.fragLength(); ++i) {
        w.le<uint32_t>(sch.groupCount(i));
        for (std::size_t a = 0; a < alpha.size(); ++a)
            w.le<uint8_t>(sch.project(i, a));
    }
    w.le<uint64_t>(ix.binCount());
    w.le<uint64_t>(ix.size());
    w.le<uint64_t>(storeContentHash(ix.store()));
    for (uint64_t b : ix.binArray())
        w.le<uint64_t>(b);
    for (const FragmentRef& f : ix.fragArray()) {
        w.le<uint32_t>(f.record);
        w.le<uint32_t>(f.offset);
    }
    for (uint8_t l : ix.lcpArray())
        w.le<uint8_t>(l);
    uint32_t crc = w.crc;
    detail::CrcWriter tail{out};
    tail.le<uint32_t>(crc);
    out.flush();
}

/// Reloads an index over the store it was built from.  Errors on magic or
/// version mismatch, truncation, checksum failure, fragment-length or corpus
/// mismatch with the supplied store.
inline FsIndex loadIndex(std::istream& in, const FragmentStore& store) {
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kIndexMagic, 4) != 0)
        throw std::runtime_error("index file: bad magic");
    unsigned char vbuf[4];
    in.read(reinterpret_cast<char*>(vbuf), 4);
    if (in.gcount() != 4)
        throw std::runtime_error("index file: truncated");
    uint32_t version = vbuf[0] | (vbuf[1] << 8) | (vbuf[2] << 16) | (uint32_t(vbuf[3]) << 24);
    if (version != kIndexFormatVersion)
        throw std::runtime_error("index file: unsupported format version " + std::to_string(version));

    detail::CrcReader r{in};
    uint32_t m = r.le<uint32_t>();
    if (m != store.fragLength())
        throw std::runtime_error("index file: fragment length " + std::to_string(m) +
                                 " does not match store fragment length " +
                                 std::to_string(store.fragLength()));
    uint32_t alphaSize = r.le<uint32_t>();
    std::string letters(alphaSize, '\0');
    r.bytes(letters.data(), alphaSize);
    Alphabet alpha{letters};
    if (alpha != store.alphabet())
        throw std::runtime_error("index file: alphabet does not match store alphabet");
    std::vector<std::vector<std::string>> groups(m);
    for (uint32_t i = 0; i < m; ++i) {
        uint32_t g = r.le<uint32_t>();
        groups[i].resize(g);
        for (uint32_t a = 0; a < alphaSize; ++a) {
            uint8_t sigma = r.le<uint8_t>();
            if (sigma >= g)
                throw std::runtime_error("index file: corrupt partition table");
            groups[i][sigma] += letters[a];
        }
    }
    PartitionScheme scheme{alpha, std::move(groups)};
    uint64_t binCount = r.le<uint64_t>();
    if (binCount != scheme.binCount())
        throw std::runtime_error("index file: bin count does not match partition tables");
    uint64_t n = r.le<uint64_t>();
    uint64_t hash = r.le<uint64_t>();
    if (hash != storeContentHash(store))
        throw std::runtime_error("index file: sequence corpus hash mismatch");
    if (n != store.size())
        throw std::runtime_error("index file: fragment count mismatch");

    std::vector<uint64_t> bin(binCount + 1);
    for (uint64_t& b : bin)
        b = r.le<uint64_t>();
    std::vector<FragmentRef> frag(n);
    for (FragmentRef& f : frag) {
        f.record = r.le<uint32_t>();
        f.offset = r.le<uint32_t>();
    }
    std::vector<uint8_t> lcp(n);
    for (uint8_t& l : lcp)
        l = r.le<uint8_t>();

    uint32_t payloadCrc = r.crc;
    detail::CrcReader tail{in};
    uint32_t storedCrc = tail.le<uint32_t>();
    if (storedCrc != payloadCrc)
        throw std::runtime_error("index file: checksum failure");

    if (bin.front() != 0 || bin.back() != n)
        throw std::runtime_error("index file: corrupt bin offsets");
    return FsIndex{store, std::move(scheme), std::move(bin), std::move(frag), std::move(lcp)};
}

} // namespace fsi
