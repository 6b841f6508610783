public void loadAndValidate(String path) {
    open(path);
    verify(path);
}
