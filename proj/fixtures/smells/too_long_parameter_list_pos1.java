public void mergeRecords(String first, String second, String third, String fourth, String fifth, String sixth) {
    register(first, second);
    register(third, fourth);
    register(fifth, sixth);
}
