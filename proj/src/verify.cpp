namespace fpx {
}
