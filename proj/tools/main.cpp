#include "reasontrans/cli.hpp"

int main(int argc, char** argv) {
    return reasontrans::cli_main(argc, argv);
}
