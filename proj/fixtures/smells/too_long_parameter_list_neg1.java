public void copyRange(String source, String target, String mode, String owner, String group) {
    transfer(source, target);
    apply(mode, owner, group);
}
