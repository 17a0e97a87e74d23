// cacrypt — chaotic stream cipher built on Life-Like cellular automata.
//
// Subcommands: encrypt, decrypt, keystream, rank, enttest, analyze, catalog.
// Exit codes: 0 success, 1 usage error, 2 data/format error.

#include <cacrypt/cacrypt.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace cacrypt;

namespace {

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw FormatError("read failed for " + path.string());
    return bytes;
}

// Output files appear only on success: data goes to a sibling temp file
// that is renamed into place on commit and removed otherwise.
class AtomicFile {
public:
    explicit AtomicFile(const fs::path& target)
        : target_(target),
          temp_(target.string() + ".tmp" + std::to_string(::getpid())) {
        out_.open(temp_, std::ios::binary | std::ios::trunc);
        if (!out_) throw FormatError("cannot open " + target.string() + " for writing");
    }

    ~AtomicFile() {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            fs::remove(temp_, ec);
        }
    }

    std::ostream& stream() { return out_; }

    void commit() {
        out_.flush();
        if (!out_) throw FormatError("write failed for " + target_.string());
        out_.close();
        fs::rename(temp_, target_);
        committed_ = true;
    }

private:
    fs::path target_;
    fs::path temp_;
    std::ofstream out_;
    bool committed_ = false;
};

void write_output(const std::string& path, std::span<const std::uint8_t> bytes) {
    if (path == "-") {
        std::cout.write(reinterpret_cast<const char*>(bytes.data()),
                        std::streamsize(bytes.size()));
        std::cout.flush();
        if (!std::cout) throw FormatError("write to stdout failed");
        return;
    }
    AtomicFile out{path};
    out.stream().write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    out.commit();
}

struct KeyOptions {
    std::string text;
    std::string hex;

    void attach(CLI::App* cmd) {
        auto* a = cmd->add_option("--key", text, "key as UTF-8 text, at most 16 bytes (zero padded)");
        auto* b = cmd->add_option("--key-hex", hex, "key as exactly 32 hex characters");
        a->excludes(b);
    }

    std::array<std::uint8_t, 16> password() const {
        std::array<std::uint8_t, 16> pw{};
        if (!hex.empty()) {
            if (hex.size() != 32)
                throw std::invalid_argument("--key-hex must be exactly 32 hex characters");
            for (int i = 0; i < 16; ++i) {
                const auto nibble = [&](char c) -> unsigned {
                    if (c >= '0' && c <= '9') return unsigned(c - '0');
                    if (c >= 'a' && c <= 'f') return unsigned(c - 'a' + 10);
                    if (c >= 'A' && c <= 'F') return unsigned(c - 'A' + 10);
                    throw std::invalid_argument("--key-hex contains a non-hex character");
                };
                pw[std::size_t(i)] =
                    std::uint8_t(nibble(hex[std::size_t(2 * i)]) << 4 | nibble(hex[std::size_t(2 * i + 1)]));
            }
            return pw;
        }
        if (text.empty())
            throw std::invalid_argument("a key is required: pass --key or --key-hex");
        if (text.size() > 16)
            throw std::invalid_argument("--key is longer than 16 bytes; use --key-hex for exact keys");
        for (std::size_t i = 0; i < text.size(); ++i) pw[i] = std::uint8_t(text[i]);
        return pw;
    }
};

struct ParamOptions {
    std::string rule_text = "B1357/S02468";
    std::string size_text = "128x128";
    std::uint32_t rho = 10;
    std::uint32_t alpha = kDefaultAlpha;
    double mu = kDefaultMu;

    void attach(CLI::App* cmd) {
        cmd->add_option("--rule", rule_text, "Life-Like rule in B/S notation")
            ->capture_default_str();
        cmd->add_option("--size", size_text, "grid size ROWSxCOLS")->capture_default_str();
        cmd->add_option("--rho", rho, "raw bytes XOR-composed per keystream byte")
            ->capture_default_str();
        cmd->add_option("--alpha", alpha, "logistic-map transient iterations")
            ->capture_default_str();
        cmd->add_option("--mu", mu, "logistic-map parameter in [3.9, 4.0]")->capture_default_str();
    }

    static std::pair<int, int> parse_size(const std::string& text) {
        const auto x = text.find_first_of("xX");
        if (x == std::string::npos || x == 0 || x + 1 >= text.size())
            throw std::invalid_argument("--size must look like 128x128");
        int rows = 0, cols = 0;
        try {
            rows = std::stoi(text.substr(0, x));
            cols = std::stoi(text.substr(x + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("--size must look like 128x128");
        }
        if (rows < 1 || cols < 1) throw std::invalid_argument("--size dimensions must be positive");
        return {rows, cols};
    }

    CipherParams cipher_params() const {
        CipherParams p;
        p.rule = parse_rule(rule_text);
        const auto [rows, cols] = parse_size(size_text);
        p.rows = rows;
        p.cols = cols;
        p.rho = rho;
        p.alpha = alpha;
        p.mu = mu;
        p.validate();
        return p;
    }
};

std::string format_metric(double v) {
    if (v == -std::numeric_limits<double>::infinity()) return "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void print_ent_report(const EntReport& rep, bool csv, std::ostream& out) {
    if (csv) {
        out << "bytes,entropy_bits_per_byte,chi_square,chi_square_pvalue,arithmetic_mean,"
               "monte_carlo_pi,pi_error_percent,serial_correlation,serial_correlation_degenerate\n";
        out << rep.byte_count << ',' << format_metric(rep.entropy_bits_per_byte) << ','
            << format_metric(rep.chi_square) << ',' << format_metric(rep.chi_square_pvalue) << ','
            << format_metric(rep.arithmetic_mean) << ',' << format_metric(rep.monte_carlo_pi) << ','
            << format_metric(rep.pi_error_percent) << ',' << format_metric(rep.serial_correlation)
            << ',' << (rep.serial_correlation_degenerate ? 1 : 0) << '\n';
        return;
    }
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "bytes                   : %llu\n"
                  "entropy (bits/byte)     : %.6f\n"
                  "chi-square              : %.4f  (p-value %.4f)\n"
                  "arithmetic mean         : %.4f  (127.5 = random)\n"
                  "monte carlo pi          : %.9f  (error %.3f%%)\n"
                  "serial correlation      : %.6f%s\n",
                  static_cast<unsigned long long>(rep.byte_count), rep.entropy_bits_per_byte,
                  rep.chi_square, rep.chi_square_pvalue, rep.arithmetic_mean, rep.monte_carlo_pi,
                  rep.pi_error_percent, rep.serial_correlation,
                  rep.serial_correlation_degenerate ? "  (degenerate: zero variance)" : "");
    out << buf;
}

int run_catalog() {
    for (const Rule& rule : catalog())
        std::cout << rule.name() << '\t' << format_rule(rule) << '\n';
    return 0;
}

int run_encrypt(const KeyOptions& key, const ParamOptions& opts, const std::string& input,
                const std::string& output) {
    const CipherParams params = opts.cipher_params();
    const auto password = key.password();
    const auto plaintext = read_file(input);
    const auto envelope = seal(plaintext, password, params);
    write_output(output, encode_envelope(envelope));
    return 0;
}

int run_decrypt(const KeyOptions& key, const std::string& input, const std::string& output) {
    const auto password = key.password();
    const auto bytes = read_file(input);
    const auto envelope = decode_envelope(bytes);
    write_output(output, open(envelope, password));
    return 0;
}

int run_keystream(const KeyOptions& key, const ParamOptions& opts, std::uint64_t count,
                  const std::string& output) {
    const CipherParams params = opts.cipher_params();
    const SeedConfig seed{key.password(), params.mu, params.alpha, kDefaultEpsilon};
    KeystreamGenerator gen =
        make_keystream(seed, params.rows, params.cols, params.rule, params.rho);
    if (count < 1) throw std::invalid_argument("--bytes must be at least 1");

    if (output == "-") {
        export_raw(gen, count, std::cout);
        std::cout.flush();
        return 0;
    }
    AtomicFile out{output};
    export_raw(gen, count, out.stream());
    out.commit();
    return 0;
}

int run_rank(const std::string& size_text, const MetricHorizons& horizons, int trials,
             std::uint64_t trial_seed, const std::string& output) {
    const auto [rows, cols] = ParamOptions::parse_size(size_text);
    const auto reports = rank_rules(catalog(), rows, cols, horizons, trials, trial_seed);

    std::string csv = "rule,name,entropy,lyapunov,hamming,max\n";
    for (const auto& rep : reports) {
        csv += format_rule(rep.rule) + ',' + rep.rule.name() + ',' + format_metric(rep.entropy) +
               ',' + format_metric(rep.lyapunov) + ',' + format_metric(rep.hamming) + ',' +
               format_metric(rep.max_score) + '\n';
    }
    if (output == "-")
        std::cout << csv;
    else
        write_output(output, {reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()});
    return 0;
}

int run_enttest(const std::string& input, bool generate, const KeyOptions& key,
                const ParamOptions& opts, std::uint64_t count, bool csv) {
    EntAccumulator acc;
    if (generate) {
        const CipherParams params = opts.cipher_params();
        const SeedConfig seed{key.password(), params.mu, params.alpha, kDefaultEpsilon};
        KeystreamGenerator gen =
            make_keystream(seed, params.rows, params.cols, params.rule, params.rho);
        std::vector<std::uint8_t> buffer;
        std::uint64_t remaining = count;
        while (remaining > 0) {
            const std::size_t chunk = std::size_t(std::min<std::uint64_t>(remaining, 1 << 20));
            buffer.clear();
            gen.next_bytes(chunk, buffer);
            acc.feed(buffer);
            remaining -= chunk;
        }
    } else {
        if (input.empty())
            throw std::invalid_argument("enttest needs an input file or --generate");
        std::ifstream in(input, std::ios::binary);
        if (!in) throw FormatError("cannot open " + input);
        std::vector<char> buffer(1 << 20);
        while (in) {
            in.read(buffer.data(), std::streamsize(buffer.size()));
            acc.feed({reinterpret_cast<const std::uint8_t*>(buffer.data()),
                      std::size_t(in.gcount())});
        }
        if (in.bad()) throw FormatError("read failed for " + input);
    }

    EntReport rep;
    try {
        rep = acc.finish();
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what()); // short stream is a data problem
    }
    print_ent_report(rep, csv, std::cout);
    return 0;
}

int run_analyze(const std::string& input, const std::string& histogram_out,
                const std::string& spectrum_out, bool print_flatness) {
    const GrayImage img = load_pgm(read_file(input));

    if (!histogram_out.empty()) {
        const auto counts = histogram(img);
        std::string csv = "value,count\n";
        for (int v = 0; v < 256; ++v)
            csv += std::to_string(v) + ',' + std::to_string(counts[std::size_t(v)]) + '\n';
        write_output(histogram_out, {reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()});
    }

    if (!spectrum_out.empty() || print_flatness) {
        GrayImage square = crop_to_pow2(img);
        if (square.width != img.width || square.height != img.height)
            std::cerr << "analyze: cropped to " << square.width << "x" << square.height
                      << " for the transform\n";
        const Spectrum spec = power_spectrum(square);

        if (!spectrum_out.empty()) {
            // log-scaled magnitude image
            GrayImage view;
            view.width = spec.width;
            view.height = spec.height;
            view.pixels.resize(spec.magnitudes.size());
            double peak = 0.0;
            for (double m : spec.magnitudes) peak = std::max(peak, std::log1p(m));
            for (std::size_t k = 0; k < spec.magnitudes.size(); ++k) {
                const double v = peak > 0.0 ? std::log1p(spec.magnitudes[k]) / peak : 0.0;
                view.pixels[k] = std::uint8_t(std::lround(255.0 * v));
            }
            write_output(spectrum_out, save_pgm(view));
        }

        if (print_flatness) {
            const auto flat = spectrum_flatness(spec);
            std::cout << format_metric(flat.value) << (flat.degenerate ? " (degenerate)" : "")
                      << '\n';
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chaotic stream cipher built on Life-Like cellular automata"};
    app.require_subcommand(1);

    // encrypt
    auto* enc = app.add_subcommand("encrypt", "encrypt a file into a .cacr envelope");
    KeyOptions enc_key;
    ParamOptions enc_params;
    std::string enc_in, enc_out;
    enc_key.attach(enc);
    enc_params.attach(enc);
    enc->add_option("input", enc_in, "plaintext file")->required();
    enc->add_option("output", enc_out, "envelope file ('-' for stdout)")->required();

    // decrypt
    auto* dec = app.add_subcommand("decrypt", "decrypt a .cacr envelope");
    KeyOptions dec_key;
    std::string dec_in, dec_out;
    dec_key.attach(dec);
    dec->add_option("input", dec_in, "envelope file")->required();
    dec->add_option("output", dec_out, "plaintext file ('-' for stdout)")->required();

    // keystream
    auto* ks = app.add_subcommand("keystream", "write raw keystream bytes (DIEHARD format)");
    KeyOptions ks_key;
    ParamOptions ks_params;
    std::uint64_t ks_bytes = 10485760;
    std::string ks_out;
    ks_key.attach(ks);
    ks_params.attach(ks);
    ks->add_option("--bytes", ks_bytes, "number of bytes to emit")->capture_default_str();
    ks->add_option("output", ks_out, "output file ('-' for stdout)")->required();

    // rank
    auto* rank = app.add_subcommand("rank", "rank catalog rules by chaos metrics (CSV)");
    std::string rank_size = "128x128";
    MetricHorizons horizons;
    int rank_trials = 5;
    std::uint64_t rank_seed = 1;
    std::string rank_out = "-";
    rank->add_option("--size", rank_size, "grid size ROWSxCOLS")->capture_default_str();
    rank->add_option("--entropy-steps", horizons.entropy_steps)->capture_default_str();
    rank->add_option("--lyapunov-steps", horizons.lyapunov_steps)->capture_default_str();
    rank->add_option("--hamming-steps", horizons.hamming_steps)->capture_default_str();
    rank->add_option("--trials", rank_trials, "random seed grids per rule")->capture_default_str();
    rank->add_option("--trial-seed", rank_seed, "seed for the trial grids")->capture_default_str();
    rank->add_option("-o,--output", rank_out, "CSV output ('-' for stdout)")->capture_default_str();

    // enttest
    auto* ent = app.add_subcommand("enttest", "entropy/chi-square/mean/pi/SCC battery");
    std::string ent_in;
    bool ent_generate = false;
    KeyOptions ent_key;
    ParamOptions ent_params;
    std::uint64_t ent_bytes = 10485760;
    bool ent_csv = false;
    ent->add_option("input", ent_in, "byte stream to test");
    ent->add_flag("--generate", ent_generate, "test the generator's own keystream");
    ent_key.attach(ent);
    ent_params.attach(ent);
    ent->add_option("--bytes", ent_bytes, "bytes to generate with --generate")
        ->capture_default_str();
    ent->add_flag("--csv", ent_csv, "emit CSV instead of the text report");

    // analyze
    auto* ana = app.add_subcommand("analyze", "histogram / power spectrum of a PGM image");
    std::string ana_in, ana_hist, ana_spec;
    bool ana_flat = false;
    ana->add_option("input", ana_in, "binary PGM (P5) image")->required();
    ana->add_option("--histogram", ana_hist, "write value,count CSV here");
    ana->add_option("--spectrum", ana_spec, "write log-scaled spectrum PGM here");
    ana->add_flag("--flatness", ana_flat, "print the spectral flatness");

    // catalog
    auto* cat = app.add_subcommand("catalog", "list the built-in rules");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cat->parsed()) return run_catalog();
        if (enc->parsed()) return run_encrypt(enc_key, enc_params, enc_in, enc_out);
        if (dec->parsed()) return run_decrypt(dec_key, dec_in, dec_out);
        if (ks->parsed()) return run_keystream(ks_key, ks_params, ks_bytes, ks_out);
        if (rank->parsed())
            return run_rank(rank_size, horizons, rank_trials, rank_seed, rank_out);
        if (ent->parsed())
            return run_enttest(ent_in, ent_generate, ent_key, ent_params, ent_bytes, ent_csv);
        if (ana->parsed()) return run_analyze(ana_in, ana_hist, ana_spec, ana_flat);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
