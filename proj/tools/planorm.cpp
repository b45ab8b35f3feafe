#include "planorm/drivers.hpp"

int main(int argc, char** argv) { return planorm::run_cli(argc, argv); }
