#include <fstream>
#include <sstream>

#include "totient/census.hpp"
#include "totient/errors.hpp"

namespace totient {
namespace {

constexpr const char* kMagic = "totient-census-checkpoint";
constexpr int kVersion = 1;

template <class T>
void expect(std::istream& in, T& value, const char* what) {
    if (!(in >> value)) throw CheckpointError(std::string("malformed checkpoint: missing ") + what);
}

void expect_word(std::istream& in, const std::string& word) {
    std::string got;
    if (!(in >> got) || got != word) throw CheckpointError("malformed checkpoint: expected '" + word + "'");
}

}  // namespace

// Layout (whitespace separated, one record per line):
//   totient-census-checkpoint 1
//   fingerprint <hex>
//   next_window <n>
//   tallies <count>
//   <ell> <gt> <lt> <eq> <considered> <k> <p_1> ... <p_k>     (count lines)
//   end
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CheckpointError("cannot write checkpoint " + tmp.string());
        out << kMagic << ' ' << kVersion << '\n';
        out << "fingerprint " << std::hex << cp.fingerprint << std::dec << '\n';
        out << "next_window " << cp.next_window << '\n';
        out << "tallies " << cp.tallies.size() << '\n';
        for (const auto& [ell, t] : cp.tallies) {
            out << ell << ' ' << t.gt << ' ' << t.lt << ' ' << t.eq << ' ' << t.primes_considered << ' '
                << t.equality_primes.size();
            for (u64 p : t.equality_primes) out << ' ' << p;
            out << '\n';
        }
        out << "end\n";
        out.flush();
        if (!out) throw CheckpointError("short write on checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
    expect_word(in, kMagic);
    int version = 0;
    expect(in, version, "version");
    if (version != kVersion) throw CheckpointError("unsupported checkpoint version " + std::to_string(version));

    Checkpoint cp;
    expect_word(in, "fingerprint");
    in >> std::hex;
    expect(in, cp.fingerprint, "fingerprint");
    in >> std::dec;
    expect_word(in, "next_window");
    expect(in, cp.next_window, "next_window");
    expect_word(in, "tallies");
    std::size_t count = 0;
    expect(in, count, "tally count");
    for (std::size_t i = 0; i < count; ++i) {
        SignTally t;
        std::size_t k = 0;
        expect(in, t.ell, "ell");
        expect(in, t.gt, "gt");
        expect(in, t.lt, "lt");
        expect(in, t.eq, "eq");
        expect(in, t.primes_considered, "primes_considered");
        expect(in, k, "equality prime count");
        t.equality_primes.resize(k);
        for (auto& p : t.equality_primes) expect(in, p, "equality prime");
        if (t.gt + t.lt + t.eq != t.primes_considered) throw CheckpointError("checkpoint tally fails partition check");
        cp.tallies[t.ell] = std::move(t);
    }
    expect_word(in, "end");
    return cp;
}

}  // namespace totient
