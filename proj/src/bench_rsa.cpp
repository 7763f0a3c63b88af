#include "pascal/bench_rsa.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "pascal/diag.hpp"
#include "pascal/expr.hpp"

namespace pascal {

namespace {

void check_params(const RsaParams &p) {
    if (p.n < 4 || p.n > 32)
        throw ParamOutOfRange("key width must be in 4..32, got " + std::to_string(p.n));
    if (p.cycles_square < 1 || p.cycles_multiply < 1)
        throw ParamOutOfRange("cycle counts must be >= 1");
    if (p.cycles_square > 8 || p.cycles_multiply > 8)
        throw ParamOutOfRange("cycle counts above 8 are not supported");
}

int clog2(int values) {  // width to count 0..values-1
    int w = 1;
    while ((1 << w) < values)
        w++;
    return w;
}

std::string hexc(int width, uint64_t value) {
    std::ostringstream s;
    s << width << "'h" << std::hex << value;
    return s.str();
}

} // namespace

std::string rsa_module_name(const RsaParams &p) { return "rsa" + std::to_string(p.n); }

std::string generate(const RsaParams &p) {
    check_params(p);
    const int n = p.n;
    const int bw = clog2(n);                                   // bit index 0..n-1
    const int sw = clog2(std::max(p.cycles_square, p.cycles_multiply));
    const std::string name = rsa_module_name(p);

    std::ostringstream s;
    s << "// " << name << ": " << n << "-bit square-and-multiply exponentiation schedule\n";
    s << "// " << p.cycles_square << " cycle(s) per squaring, " << p.cycles_multiply
      << " extra per set key bit; zero keys never complete\n";
    s << "// @secret key\n";
    s << "// @observable pt done\n";
    s << "// @start start\n";
    s << "// @done done\n";
    s << "// @bound " << suggested_bound(p) << "\n";
    s << "module " << name << "(input clk, input rst, input start, input [" << n - 1
      << ":0] key, input [" << n - 1 << ":0] ct, output reg [" << n - 1
      << ":0] pt, output done);\n";
    s << "  reg [1:0] state;\n";
    s << "  reg [" << n - 1 << ":0] ksh;\n";
    s << "  reg [" << bw - 1 << ":0] bits;\n";
    s << "  reg [" << sw - 1 << ":0] sub;\n";
    s << "  wire sq_step;\n";
    s << "  wire mul_step;\n";
    s << "  wire adv;\n";
    s << "  wire last_bit;\n";
    s << "  assign sq_step = (state == 2'h1) & (sub == " << hexc(sw, p.cycles_square - 1)
      << ");\n";
    s << "  assign mul_step = (state == 2'h2) & (sub == " << hexc(sw, p.cycles_multiply - 1)
      << ");\n";
    s << "  assign adv = (sq_step & ~ksh[0]) | mul_step;\n";
    s << "  assign last_bit = bits == " << hexc(bw, (uint64_t)(n - 1)) << ";\n";
    s << "  assign done = (state == 2'h3) | (adv & last_bit);\n";
    s << "  always @(posedge clk) begin\n";
    s << "    if (rst) begin\n";
    s << "      state <= 2'h0;\n";
    s << "      ksh <= " << hexc(n, 0) << ";\n";
    s << "      bits <= " << hexc(bw, 0) << ";\n";
    s << "      sub <= " << hexc(sw, 0) << ";\n";
    s << "      pt <= " << hexc(n, 0) << ";\n";
    s << "    end else begin\n";
    s << "      if (start) begin\n";
    s << "        if (key != " << hexc(n, 0) << ") begin\n";
    s << "          state <= 2'h1;\n";
    s << "          ksh <= key;\n";
    s << "          bits <= " << hexc(bw, 0) << ";\n";
    s << "          sub <= " << hexc(sw, 0) << ";\n";
    s << "          pt <= ct;\n";
    s << "        end else begin\n";
    s << "          state <= 2'h0;\n";
    s << "        end\n";
    s << "      end else begin\n";
    s << "        if (state == 2'h1) begin\n";
    s << "          if (sq_step) begin\n";
    s << "            sub <= " << hexc(sw, 0) << ";\n";
    s << "            pt <= {pt[" << n - 2 << ":0], pt[" << n - 1 << "]} ^ ct;\n";
    s << "            if (ksh[0]) begin\n";
    s << "              state <= 2'h2;\n";
    s << "            end else begin\n";
    s << "              ksh <= {1'h0, ksh[" << n - 1 << ":1]};\n";
    s << "              if (last_bit) state <= 2'h3; else bits <= bits + 1;\n";
    s << "            end\n";
    s << "          end else begin\n";
    s << "            sub <= sub + 1;\n";
    s << "          end\n";
    s << "        end else begin\n";
    s << "          if (state == 2'h2) begin\n";
    s << "            if (mul_step) begin\n";
    s << "              sub <= " << hexc(sw, 0) << ";\n";
    s << "              pt <= pt ^ ksh ^ {pt[0], pt[" << n - 1 << ":1]};\n";
    s << "              ksh <= {1'h0, ksh[" << n - 1 << ":1]};\n";
    s << "              if (last_bit) begin\n";
    s << "                state <= 2'h3;\n";
    s << "              end else begin\n";
    s << "                state <= 2'h1;\n";
    s << "                bits <= bits + 1;\n";
    s << "              end\n";
    s << "            end else begin\n";
    s << "              sub <= sub + 1;\n";
    s << "            end\n";
    s << "          end\n";
    s << "        end\n";
    s << "      end\n";
    s << "    end\n";
    s << "  end\n";
    s << "endmodule\n";
    return s.str();
}

int expected_latency(const RsaParams &p, uint64_t key) {
    check_params(p);
    if ((key & ~width_mask(p.n)) != 0)
        throw ParamOutOfRange("key does not fit in " + std::to_string(p.n) + " bits");
    if (key == 0)
        throw ZeroKey("expected_latency is undefined for a zero key");
    int pop = std::popcount(key);
    return p.n * p.cycles_square + pop * p.cycles_multiply;
}

int suggested_bound(const RsaParams &p) {
    return p.n * (p.cycles_square + p.cycles_multiply) + 4;
}

} // namespace pascal
